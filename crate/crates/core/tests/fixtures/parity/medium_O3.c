int tally(int *p, int n) {
  int s = 0;
  for (int i = 0; i < n; i++) {
    if (p[i] > 0) s += p[i] * 3; else s -= p[i] / 2;
    s ^= i;
  }
  return s;
}
int entry(int *p, int n) { return tally(p, n) + 1; }
