#include <setjmp.h>
jmp_buf env;
int guarded(int x) {
  if (setjmp(env)) return -1;
  return x + 1;
}
int entry(int v) { return guarded(v) * 3; }
