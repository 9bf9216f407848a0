package br.ufscar.advanced.adaptation;

import br.ufscar.advanced.adaptation.knowledge.KnowledgeBase;

public class SlaveExecutor {
    private KnowledgeBase knowledge;

    public void execute() {
        knowledge.store("executed");
    }
}
