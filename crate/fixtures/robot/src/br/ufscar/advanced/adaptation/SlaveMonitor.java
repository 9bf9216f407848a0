package br.ufscar.advanced.adaptation;

import br.ufscar.advanced.adaptation.knowledge.KnowledgeBase;
import br.ufscar.advanced.robot.BluetoothAdapter;

public class SlaveMonitor {
    private BluetoothAdapter adapter;
    private SlaveAnalyzer analyzer;
    private KnowledgeBase knowledge;

    public SlaveMonitor(BluetoothAdapter adapter, SlaveAnalyzer analyzer, KnowledgeBase knowledge) {
        this.adapter = adapter;
        this.analyzer = analyzer;
        this.knowledge = knowledge;
    }

    public void sample() {
        int mode = adapter.getScanMode();
        knowledge.store(Integer.valueOf(mode));
        analyzer.analyze();
    }
}
