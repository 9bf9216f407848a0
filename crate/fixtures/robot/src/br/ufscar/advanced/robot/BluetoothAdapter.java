package br.ufscar.advanced.robot;

public class BluetoothAdapter {
    private int scanMode;

    public int getScanMode() {
        int min = 20;
        if (scanMode < min) {
            return min;
        }
        return scanMode;
    }
}
