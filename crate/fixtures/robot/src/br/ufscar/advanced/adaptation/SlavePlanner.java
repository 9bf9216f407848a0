package br.ufscar.advanced.adaptation;

import br.ufscar.advanced.adaptation.knowledge.*;

public class SlavePlanner {
    private SlaveExecutor executor;
    private KnowledgeBase knowledge;

    public void plan() {
        knowledge.store(new ProximityReference());
        executor.execute();
    }
}
