"""Level-1, level <=2 and level-3 trees, partial trees, towers and named fixtures."""
