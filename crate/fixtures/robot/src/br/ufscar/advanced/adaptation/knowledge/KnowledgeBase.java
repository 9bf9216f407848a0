package br.ufscar.advanced.adaptation.knowledge;

import java.util.ArrayList;
import java.util.List;

public class KnowledgeBase {
    private final List<Object> entries = new ArrayList<>();

    public void store(Object entry) {
        entries.add(entry);
    }
}
