package br.ufscar.advanced.robot;

public class UserManager {
    private String user;

    public String getUser() {
        return user;
    }
}
