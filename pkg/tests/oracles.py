"""Independent sympy oracles used by the tests."""

import sympy


def sym_rational(x):
    return sympy.Rational(x.numerator, x.denominator)


def brute_metric_dim(t):
    """Dimension of {g symmetric : g([x,y],z) + g(y,[x,z]) = 0}, straight from the bilinear identity."""
    n = t.dim
    g = sympy.Matrix(n, n, lambda a, b: sympy.Symbol(f"g{min(a, b)}_{max(a, b)}"))
    eqs = []
    for x in range(n):
        for y in range(n):
            for z in range(n):
                s = sum(sym_rational(t.c[x][y][k]) * g[k, z] + sym_rational(t.c[x][z][k]) * g[y, k]
                        for k in range(n))
                if s != 0:
                    eqs.append(s)
    unknowns = sorted(g.free_symbols, key=str)
    if not eqs:
        return len(unknowns)
    a, _ = sympy.linear_eq_to_matrix(eqs, unknowns)
    return len(unknowns) - a.rank()


def brute_derivation_dim(t):
    """Dimension of {D : D[x,y] = [Dx,y] + [x,Dy]} with D acting on coordinates."""
    n = t.dim
    d = sympy.Matrix(n, n, lambda a, b: sympy.Symbol(f"d{a}_{b}"))
    c = [[sympy.Matrix([sym_rational(v) for v in t.c[i][j]]) for j in range(n)] for i in range(n)]

    def br(u, v):
        out = sympy.zeros(n, 1)
        for i in range(n):
            for j in range(n):
                if u[i] != 0 and v[j] != 0:
                    out += u[i] * v[j] * c[i][j]
        return out

    eqs = []
    for i in range(n):
        for j in range(i + 1, n):
            ei = sympy.eye(n)[:, i]
            ej = sympy.eye(n)[:, j]
            lhs = d * br(ei, ej) - br(d * ei, ej) - br(ei, d * ej)
            eqs.extend(x for x in lhs if x != 0)
    unknowns = list(d)
    if not eqs:
        return n * n
    a, _ = sympy.linear_eq_to_matrix(eqs, unknowns)
    return n * n - a.rank()
