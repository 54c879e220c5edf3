"""Undetermined-coefficient expansion of the case-(iii) Henon-Heiles field
in powers of s = t^(1/2), independent of the C++ recursion.

y1 = s^-1 * sum a_k s^k, y2 = s^-4 * sum b_k s^k; free data: a_0 = alpha,
a_4 = beta, b_12 = -gamma.  Prints coefficients, residue relations, curve.
"""
import sys
import sympy as sp

N = int(sys.argv[1]) if len(sys.argv) > 1 else 12
s, A, al, be, ga, b1, b2 = sp.symbols("s A alpha beta gamma b1 b2")
R = sp.Rational
a = sp.symbols(f"a0:{N+1}")
b = sp.symbols(f"b0:{N+1}")
y1 = sum(a[k] * s**(k - 1) for k in range(N + 1))
y2 = sum(b[k] * s**(k - 4) for k in range(N + 1))
ddt = lambda f: sp.expand(sp.diff(f, s) / (2 * s))
x1, x2 = ddt(y1), ddt(y2)
e1 = sp.expand((ddt(x1) + A * y1 + 2 * y1 * y2) * s**5)   # lowest s^0
e2 = sp.expand((ddt(x2) + 16 * A * y2 + y1**2 + 16 * y2**2) * s**8)
sol = {a[0]: al, b[0]: R(-3, 8), a[4]: be, b[12]: -ga}
for k in range(1, N + 1):
    eqs = []
    for e in (e1, e2):
        c = sp.expand(e.coeff(s, k).subs(sol))
        if c != 0:
            eqs.append(c)
    unk = [v for v in (a[k], b[k]) if v not in sol]
    res = sp.solve(eqs, unk, dict=True) if eqs else [{}]
    assert len(res) == 1, (k, eqs)
    for v in unk:
        sol[v] = sp.expand(res[0].get(v, 0)) if v in res[0] else None
    left = [sp.expand(q.subs(sol)) for q in eqs]
    assert all(q == 0 for q in left), (k, left)
    for v in unk:
        assert sol[v] is not None, (k, v)

Y1 = sp.expand(y1.subs(sol)); Y2 = sp.expand(y2.subs(sol))
X1, X2 = ddt(Y1), ddt(Y2)
for name, f, off in (("y1", Y1, -1), ("y2", Y2, -4), ("x1", X1, -3), ("x2", X2, -6)):
    print(name, [(R(k, 2), sp.factor(sp.expand(f).coeff(s, k))) for k in range(off, off + N + 1) if sp.expand(f).coeff(s, k) != 0])
H1 = R(1, 2) * (X1**2 + X2**2) + A / 2 * (Y1**2 + 16 * Y2**2) + Y1**2 * Y2 + R(16, 3) * Y2**3
H2 = (3 * X1**4 + 6 * A * X1**2 * Y1**2 + 12 * X1**2 * Y1**2 * Y2 - 4 * X1 * X2 * Y1**3
      - 4 * A * Y1**4 * Y2 - 4 * Y1**4 * Y2**2 + 3 * A**2 * Y1**4 - R(2, 3) * Y1**6)
h1 = sp.expand(H1); h2 = sp.expand(H2)
print("H1 neg coeffs", [h1.coeff(s, -k) for k in range(1, 13)])
print("H2 neg coeffs", [h2.coeff(s, -k) for k in range(1, 13)])
r1 = h1.coeff(s, 0); r2 = h2.coeff(s, 0)
print("r1 =", r1)
print("r2 =", r2)
g = sp.solve(sp.Eq(r1, b1), ga)[0]
curve = sp.expand(r2.subs(ga, g) - b2)
print("curve (b2 coeff normalised to 1):", sp.expand(curve / curve.coeff(b2)))
