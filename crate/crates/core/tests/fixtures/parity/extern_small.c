int scale(int x) { return x * 3 + 7; }
int entry(int v) { return scale(v) ^ v; }
