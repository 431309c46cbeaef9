// placeholder, filled in with the CLI
