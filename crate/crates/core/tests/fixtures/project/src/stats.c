#include "common.h"

static int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

int mean_i(const int *v, int n) {
  long s = 0;
  for (int i = 0; i < n; i++)
    s += v[i];
  return n ? (int)(s / n) : 0;
}

int variance_i(const int *v, int n) {
  int m = mean_i(v, n);
  long s = 0;
  for (int i = 0; i < n; i++)
    s += (long)(v[i] - m) * (v[i] - m);
  return n ? clampi((int)(s / n), 0, 1 << 30) : 0;
}

int histogram(const int *v, int n, int *bins, int nbins) {
  int peak = 0;
  for (int i = 0; i < nbins; i++)
    bins[i] = 0;
  for (int i = 0; i < n; i++) {
    int b = clampi(v[i] % nbins, 0, nbins - 1);
    bins[b]++;
    if (bins[b] > bins[peak])
      peak = b;
  }
  return peak;
}

static int medium_mix(int x, int y) {
  int acc = x;
  for (int i = 0; i < (y & 7); i++) {
    acc = acc * 31 + i;
    if (acc & 1)
      acc ^= y;
    else
      acc += x >> 2;
  }
  return acc;
}

static int big_mix(int x, int y) {
  int a = x, b = y, c = x ^ y;
  for (int i = 0; i < 16; i++) {
    a += b * 3 - c;
    b ^= a << 3;
    c = (c * 17) + (a >> 2);
    if (a > b) a -= c; else b += a;
    if (c & 4) c ^= 0x1234; else c += 0x77;
    a = (a ^ (a >> 7)) * 13;
    b = (b ^ (b << 5)) + 91;
    c = c - (a & b) + (a | b);
    if ((a ^ c) & 16) b = b * 5 + 1;
    a += (b % 11) * (c % 7);
    b -= (a / 3) + (c / 5);
    c ^= (a + b) >> 1;
    if (a & 0x100) { a = a * 9 + b; b = b * 3 + c; }
    if (b & 0x200) { b = b * 7 + c; c = c * 5 + a; }
    if (c & 0x400) { c = c * 3 + a; a = a * 11 + b; }
  }
  return a ^ b ^ c;
}

static int huge_mix(int x, int y) {
  int r = 0;
  for (int round = 0; round < 4; round++) {
    r += big_mix(x + round, y - round);
    r ^= medium_mix(r, x + y + round);
    switch ((r >> 3) & 7) {
    case 0: r += 11; break;
    case 1: r *= 3; break;
    case 2: r ^= 0x55aa; break;
    case 3: r -= x; break;
    case 4: r += y * 7; break;
    case 5: r = (r << 2) | (r >> 29); break;
    case 6: r = ~r; break;
    default: r += round * round; break;
    }
  }
  return r;
}

int scramble(int seed, int rounds) {
  int s = seed;
  for (int i = 0; i < rounds; i++) {
    s = medium_mix(s, i) + medium_mix(i, s);
    s ^= big_mix(s, i) - big_mix(i, s);
    s += huge_mix(s, rounds) + huge_mix(rounds, s);
  }
  return s;
}
