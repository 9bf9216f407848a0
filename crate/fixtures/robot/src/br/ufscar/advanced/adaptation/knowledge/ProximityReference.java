package br.ufscar.advanced.adaptation.knowledge;

public class ProximityReference {
    private int threshold = 20;

    public int threshold() {
        return threshold;
    }
}
