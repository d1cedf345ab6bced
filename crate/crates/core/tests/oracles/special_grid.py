"""Regenerates the frozen special-function grid used by tests/special_functions.rs.

Incomplete beta: 50-digit quadrature of the beta integral divided by B(a, b).
Lower incomplete gamma: term-by-term power series summed at 50 digits.

    python3 special_grid.py > special_grid.txt
"""
from mpmath import mp, mpf, quad, beta, gamma, exp, log

mp.dps = 50

BETA = [
    (0.3, 127.5, 0.5), (0.5, 2, 2), (0.1, 0.5, 0.5), (0.9, 0.5, 0.5),
    (0.96, 127.5, 0.5), (0.99, 127.5, 0.5), (0.75, 127.5, 0.5), (0.51, 127.5, 0.5),
    (0.9775, 31.5, 0.5), (0.91, 3.5, 0.5), (0.64, 3.5, 0.5), (0.99, 3.5, 0.5),
    (0.2, 2, 5), (0.7, 5, 2), (0.05, 1.5, 10), (0.45, 10, 10),
    (0.55, 10, 10), (0.999, 50, 0.5), (0.6, 0.7, 3.3), (0.01, 0.3, 0.3),
    (0.8, 100, 20), (0.83, 100, 20), (0.25, 7.5, 0.5), (0.9999, 1023.5, 0.5),
    (0.95, 511.5, 0.5),
]

GAMMA = [
    (3, 2.5), (1, 0.5), (1, 5), (2, 0.1), (2, 3), (3, 41.446531673892822),
    (0.5, 0.25), (0.5, 4), (4, 1), (4, 10), (5.5, 5.5), (10, 3),
    (10, 25), (0.1, 0.01), (2.5, 7), (7, 6.5), (3, 0.001), (1.5, 2.5),
    (20, 15), (20, 30), (8, 8.5), (6, 1.2), (12, 12), (2, 60), (3.5, 0.75),
]


def inc_beta(x, a, b):
    x, a, b = mpf(x), mpf(a), mpf(b)
    # rescale so the integrand is O(1) near the upper limit; quad's stopping
    # rule is absolute and would otherwise accept a 1e-68 integral unrefined
    scale = x ** (a - 1) * (1 - x) ** (b - 1)
    f = lambda t: t ** (a - 1) * (1 - t) ** (b - 1) / scale
    # split near the peak of the integrand so the quadrature resolves it
    m = (a - 1) / (a + b - 2) if a > 1 and b > 1 else x / 2
    pts = {mpf(0), min(m, x), x}
    # the integrand piles up against the upper limit when a is large
    pts |= {x * (1 - mpf(2) ** -k) for k in range(1, 40)}
    pts = sorted(pts)
    return quad(f, pts, maxdegree=12) * scale / beta(a, b)


def lower_gamma(s, x):
    s, x = mpf(s), mpf(x)
    term = 1 / s
    total = term
    n = 0
    while True:
        n += 1
        term *= x / (s + n)
        total += term
        if abs(term) < mpf(10) ** -60 * abs(total) and n >= 200:
            break
    return total * exp(-x + s * log(x)) / gamma(s)


for x, a, b in BETA:
    print("beta", repr(x), repr(float(a)), repr(float(b)), mp.nstr(inc_beta(x, a, b), 30))
for s, x in GAMMA:
    print("gamma", repr(float(s)), repr(x), mp.nstr(lower_gamma(s, x), 30))
