#pragma once

#include <gmpxx.h>

inline mpq_class rat(long n, long d = 1) {
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}
