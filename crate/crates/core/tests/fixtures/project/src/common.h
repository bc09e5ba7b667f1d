#ifndef COMMON_H
#define COMMON_H

int count_words(const char *s);
int count_lines(const char *s);
int text_summary(const char *s, int *words, int *lines);
unsigned checksum(const char *s);

int mean_i(const int *v, int n);
int variance_i(const int *v, int n);
int histogram(const int *v, int n, int *bins, int nbins);
int scramble(int seed, int rounds);

__attribute__((noinline)) int slow_path(int x);
int fib(int n);

static inline __attribute__((always_inline)) int fast_abs(int x) { return x < 0 ? -x : x; }

#endif
