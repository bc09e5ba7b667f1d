__attribute__((always_inline)) inline int heavy(int *p, int n) {
  int s = 0;
  for (int i = 0; i < n; i++) s += p[i] * p[i] - i;
  for (int i = 0; i < n; i++) s ^= p[i] >> 1;
  return s;
}
int entry(int *p, int n) { return heavy(p, n) + 1; }
