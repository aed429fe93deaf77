"""Exact-fraction oracle for the pair families; prints values frozen in tests/test_exponents.cpp."""
from fractions import Fraction as F

EPS = F(1, 10**6)


def s_c(N, a, b):
    return F(N, 2) - (2 - b) / a


def hs_ok(q, r, N, s, eps=EPS, neg=False):
    sgn = 1 if neg else -1
    if 2 / q != F(N, 2) - N / r + sgn * s:
        return False
    if N >= 3:
        lo, hi = F(2 * N) / (N - 2 * s), F(2 * N, N - 2) - eps
        return (r >= lo + eps if neg else r > lo) and r <= hi
    if N == 2:
        if neg:
            a = 2 / (1 + s)
            return 2 / (1 - s) + eps <= r <= a * (a + eps) / eps
        a = 2 / (1 - s)
        return a < r <= a * (a + eps) / eps
    raise ValueError


def l2_ok(q, r, N):
    return 2 / q == F(N, 2) - N / r and 2 <= r and (N == 2 or r <= F(2 * N, N - 2))


def claim1(N, a, b, t):
    qh = 4 * a * (a + 2 - t) / (a * (N * a + 2 * b) - t * (N * a - 4 + 2 * b))
    rh = N * a * (a + 2 - t) / (a * (N - b) - t * (2 - b))
    at = 2 * a * (a + 2 - t) / (a * (N * (a + 1 - t) - 2 + 2 * b) - (4 - 2 * b) * (1 - t))
    ah = 2 * a * (a + 2 - t) / (4 - 2 * b - (N - 2) * a)
    return qh, rh, at, ah


def claim2(N, a, b, t, eps=None):
    if N >= 3:
        D = 4 - 2 * b - a * (N - 2)
        A = 4 * a * (N + 2) / (N * D)
        r = 2 * a * N * (N + 2) / ((4 - 2 * b) * (N + 2) - N * D)
        ab = 4 * a * (N + 2) / (4 * a * (N + 2) - (a + 1 - t) * N * D)
        rb = 2 * a * N * (N + 2) / (2 * (N + 2) * (a * (N - 2) - (2 - b)) + N * D * (a + 1 - t))
        return A, r, ab, rb
    A = 2 * a * (a + 1 - t) / (2 - b + eps)
    r = 2 * a * (a + 1 - t) / ((2 - b) * (a - t) - eps)
    ab = 2 * a / (2 * a - (2 - b) - eps)
    rb = 2 * a / eps
    return A, r, ab, rb


def lemma43(a, b, t):
    k = 4 * a * (a + 1 - t) / (4 - 2 * b - a)
    p = 6 * a * (a + 1 - t) / ((4 - 2 * b) * (a - t) + a)
    l = 4 * a * (a + 1 - t) / (a * (3 * a - 2 + 2 * b) - t * (3 * a - 4 + 2 * b))
    return k, p, l


def show(name, vals):
    print(name, ", ".join(str(v) for v in vals))


N, a, b, t = 4, F(6, 5), F(1, 4), F(1, 20)
qh, rh, at, ah = claim1(N, a, b, t)
sc = s_c(N, a, b)
show("claim1 N=4", (qh, rh, at, ah))
print("  L2", l2_ok(qh, rh, N), "Hs", hs_ok(ah, rh, N, sc), "H-s", hs_ok(at, rh, N, sc, neg=True))
print("  splitting (+1/a_hat)", (1 - 1 / at) - (a - t) / ah - 1 / ah, " (+1/q_hat)", (1 - 1 / at) - (a - t) / ah - 1 / qh)

N, a, b, t = 3, F(2), F(3, 10), F(3, 10)
A, r, ab, rb = claim2(N, a, b, t)
sc = s_c(N, a, b)
show("claim2 N=3 theta=3/10", (A, r, ab, rb))
lo, hi = F(2 * N) / (N - 2 * sc), F(2 * N, N - 2)
print("  ranges", lo < r < hi, lo < rb < hi, "holder", A - (a + 1 - t) * (ab / (ab - 1)))
print("  Hs", hs_ok(A, r, N, sc), "H-s", hs_ok(ab, rb, N, sc, neg=True))

N, a, b, t, e = 2, F(3), F(1, 5), F(1, 10), F(1, 100)
A, r, ab, rb = claim2(N, a, b, t, e)
sc = s_c(N, a, b)
show("claim2 N=2", (A, r, ab, rb))
print("  Hs", hs_ok(A, r, N, sc), "H-s", hs_ok(ab, rb, N, sc, neg=True), "holder", A - (a + 1 - t) * (ab / (ab - 1)))

a, b, t = F(2), F(3, 10), F(7, 60)
show("lemma43 N=3 theta=7/60", lemma43(a, b, t))
k, p, l = lemma43(a, b, t)
sc = s_c(3, a, b)
print("  L2", l2_ok(l, p, 3), "Hs", hs_ok(k, p, 3, sc), "time", F(1, 2) - (a - t) / k - 1 / l)
show("claim1 N=3 theta=7/60", claim1(3, a, b, t))
show("claim2 N=3 theta=7/60", claim2(3, a, b, t))
print("qhat theta=0 N=3 a=2 b=3/10", claim1(3, a, b, 0)[0], 4 * a * (a + 2) / (a * (3 * a + 2 * b)))

a, b, t = F(2), F(3, 10), F(1, 5)
k, p, l = lemma43(a, b, t)
sc = s_c(3, a, b)
show("lemma43 N=3 theta=1/5", (k, p, l))
print("  6/(3-2s_c)<p<6", 6 / (3 - 2 * sc) < p < 6, "Hs", hs_ok(k, p, 3, sc), "L2", l2_ok(l, p, 3))

qh, rh, at, ah = claim1(3, a, b, F(1, 10))
show("claim1 N=3 theta=1/10", (qh, rh, at, ah))
print("  H-s", hs_ok(at, rh, 3, sc, neg=True), "splitting", (1 - 1 / at) - (a - F(1, 10)) / ah - 1 / ah)

N, a, b, t = 4, F(7, 5), F(1, 5), F(1, 20)
A, r, ab, rb = claim2(N, a, b, t)
sc = s_c(N, a, b)
show("claim2 N=4 alpha=7/5 b=1/5 theta=1/20", (A, r, ab, rb))
print("  H-s", hs_ok(ab, rb, N, sc, neg=True), "Hs", hs_ok(A, r, N, sc))
