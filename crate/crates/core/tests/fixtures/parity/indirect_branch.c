int dispatch(int op, int x) {
  static void *table[] = {&&add, &&sub};
  goto *table[op & 1];
add:
  return x + 1;
sub:
  return x - 1;
}
int entry(int v) { return dispatch(v, 10); }
