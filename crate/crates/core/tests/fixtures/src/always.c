volatile int sink;

static inline __attribute__((always_inline)) int fast(int x) { return x + 1; }

int other(int x) { return x * x; }

int main(int argc, char **argv) {
  (void)argv;
  sink = fast(argc) + other(argc);
  return 0;
}
