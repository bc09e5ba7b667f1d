static int sq(int x) { return x * x + 1; }
int entry(int v) { return sq(v) - 3; }
