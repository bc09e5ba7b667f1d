__attribute__((noinline)) int keep(int x) { return x + 42; }
int entry(int v) { return keep(v) * 2; }
