package br.ufscar.advanced.adaptation;

import br.ufscar.advanced.adaptation.knowledge.KnowledgeBase;
import br.ufscar.advanced.adaptation.knowledge.ProximityReference;

public class SlaveAnalyzer {
    private SlavePlanner planner;
    private KnowledgeBase knowledge;
    private ProximityReference reference;

    public void analyze() {
        if (reference.threshold() > 0) {
            planner.plan();
        }
    }
}
