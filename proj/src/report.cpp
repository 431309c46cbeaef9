// placeholder, filled in with the report tooling
