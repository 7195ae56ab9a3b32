"""Independent sympy oracle for frozen expected values used by the C++ tests.

Run: python3 tests/oracles/symbolic_oracles.py
"""
import sympy as sp

x1, x2 = sp.symbols("x1 x2")
al, be, ga = sp.symbols("alpha beta gamma")


def compat(phi, orientation):
    """Residuals of phi11 d1 Phi + phi21 d2 Phi - Phi J (and second row pair)."""
    out = []
    for (f, g) in [(phi[0, 0], phi[1, 0]), (phi[0, 1], phi[1, 1])]:
        lhs = f * sp.diff(phi, x1) + g * sp.diff(phi, x2)
        if orientation == "A":  # rows index derivative axis
            J = sp.Matrix([[sp.diff(f, x1), sp.diff(g, x1)],
                           [sp.diff(f, x2), sp.diff(g, x2)]])
        else:  # columns index derivative axis
            J = sp.Matrix([[sp.diff(f, x1), sp.diff(f, x2)],
                           [sp.diff(g, x1), sp.diff(g, x2)]])
        out.append(sp.expand(lhs - phi * J))
    return out


tri = sp.Matrix([[x1 * (1 - x1), -x1 * x2], [-x1 * x2, x2 * (1 - x2)]])
diag = sp.Matrix([[x1, 0], [0, x2]])
for name, phi in [("triangle", tri), ("diag", diag), ("identity", sp.eye(2))]:
    for o in "AB":
        r = compat(phi, o)
        ok = all(m.is_zero_matrix for m in r)
        print(f"compat {name} {o}: {'PASS' if ok else 'FAIL'}", [list(m) for m in r])

# Pearson for triangle weight, generic exponents
rho = x1**al * x2**be * (1 - x1 - x2)**ga
logd = [sp.diff(sp.log(rho), v) for v in (x1, x2)]
for j in range(2):
    div = sum(sp.diff(tri[k, j], v) + tri[k, j] * logd[k] for k, v in enumerate((x1, x2)))
    print("psi", j + 1, sp.collect(sp.expand(sp.cancel(sp.together(div))), x1))

# Pearson failure with identity, alpha=1, beta=gamma=0: P_1 numerator
D = x1 * x2 * (1 - x1 - x2)
P1 = sp.expand(1 * x2 * (1 - x1 - x2))
print("identity P1 =", P1, " rem/x1:", sp.div(P1, x1, x1, x2))

# apply_L(x1) at alpha=beta=gamma=0
u = x1
L = (-x1 * (1 - x1) * sp.diff(u, x1, 2) + 2 * x1 * x2 * sp.diff(u, x1, x2)
     - x2 * (1 - x2) * sp.diff(u, x2, 2) - (1 - 3 * x1) * sp.diff(u, x1)
     - (1 - 3 * x2) * sp.diff(u, x2) + (2 + x1**2 + x2**2) * u)
print("L x1 =", sp.expand(L))

# Exact triangle integrals (alpha=beta=gamma=0)
def tint(f, a=0, b=0, c=0):
    w = x1**a * x2**b * (1 - x1 - x2)**c
    return sp.integrate(sp.integrate(f * w, (x2, 0, 1 - x1)), (x1, 0, 1))

print("mu20 =", tint(x1**2))
print("int 2+x1^2+x2^2 =", tint(2 + x1**2 + x2**2))
print("sobolev^2 x1 =", tint(x1**2) + tint(x1 * (1 - x1)))
print("mu(3,2) abc=(1,2,1) =", tint(x1**3 * x2**2, 1, 2, 1))

# Gauss-Jacobi on [0,1], weight x^a (1-x)^b: n=2, a=1, b=2 via orthogonal polynomial roots
a, b = 1, 2
t = sp.symbols("t")
w = t**a * (1 - t)**b
p0 = sp.Integer(1)
p1 = t - sp.integrate(t * w, (t, 0, 1)) / sp.integrate(w, (t, 0, 1))
c0 = sp.integrate(t * p1 * p1 * w, (t, 0, 1)) / sp.integrate(p1 * p1 * w, (t, 0, 1))
c1 = sp.integrate(p1 * p1 * w, (t, 0, 1)) / sp.integrate(w, (t, 0, 1))
p2 = sp.expand((t - c0) * p1 - c1 * p0)
nodes = sorted(sp.solve(p2, t), key=lambda r: float(r))
for nd in nodes:
    other = [m for m in nodes if m != nd][0]
    wt = sp.integrate(w * (t - other) / (nd - other), (t, 0, 1))
    print("GJ n=2 a=1 b=2 node", sp.nsimplify(nd), float(nd), "weight", sp.simplify(wt), float(wt))

# Degree-1 Galerkin eigenvalues, alpha=beta=gamma=0, as an independent oracle
mons = [sp.Integer(1), x2, x1]
def grad(p):
    return sp.Matrix([sp.diff(p, x1), sp.diff(p, x2)])
G = sp.Matrix(3, 3, lambda i, j: tint(mons[i] * mons[j]))
A = sp.Matrix(3, 3, lambda i, j: tint((grad(mons[i]).T * tri * grad(mons[j]))[0]
                                      + (2 + x1**2 + x2**2) * mons[i] * mons[j]))
nu = sp.symbols("nu")
charp = sp.factor((A - nu * G).det())
print("degree-1 char poly:", charp)
print("degree-1 eigenvalues:", [sp.N(r, 20) for r in sp.Poly(charp, nu).nroots(n=30)])
