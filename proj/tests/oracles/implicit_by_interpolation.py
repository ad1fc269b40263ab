"""Implicit equation of a P1 x P1 parametrization by dense point interpolation.

Samples the surface at integer parameter points, solves for the kernel of the
evaluation matrix of all degree-D monomials in x0..x3, and prints the unique
(up to scalar) relation in the notation of the golden files.

    python3 implicit_by_interpolation.py 7 "u^2*t*v + s^2*t*v" "u^2*t^2 + s*u*v^2" \
        "s^2*v^2 + s^2*t^2" "s^2*t*v"
"""

import itertools
import random
import sys

import sympy as sp

s, u, t, v = sp.symbols("s u t v")
xs = sp.symbols("x0:4")


def monomials(degree):
    out = []
    for e in itertools.product(range(degree + 1), repeat=4):
        if sum(e) == degree:
            out.append(e)
    out.sort(reverse=True)
    return out


def implicit(degree, polys, seed=1):
    a = [sp.Poly(sp.sympify(p.replace("^", "**")), s, u, t, v) for p in polys]
    basis = monomials(degree)
    rng = random.Random(seed)
    rows = []
    while len(rows) < len(basis) + 20:
        p = [rng.randint(-9, 9) for _ in range(4)]
        vals = [q.eval(tuple(p)) for q in a]
        if all(x == 0 for x in vals):
            continue
        rows.append([sp.prod(sp.Integer(vals[i]) ** e[i] for i in range(4)) for e in basis])
    kernel = sp.Matrix(rows).nullspace()
    if len(kernel) != 1:
        raise SystemExit(f"kernel dimension {len(kernel)}, expected 1")
    vec = kernel[0]
    vec = vec * sp.lcm([sp.fraction(c)[1] for c in vec])
    g = sp.gcd(list(vec))
    vec = vec / g
    lead = next(c for c in vec if c != 0)
    if lead < 0:
        vec = -vec
    return sum(c * sp.prod(xs[i] ** e[i] for i in range(4)) for c, e in zip(vec, basis))


def render(poly):
    p = sp.Poly(poly, *xs)
    terms = sorted(p.terms(), key=lambda te: (sum(te[0]), te[0]), reverse=True)
    parts = []
    for e, c in terms:
        mono = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
        mag = abs(c)
        body = mono if mag == 1 and mono else (f"{mag}*{mono}" if mono else f"{mag}")
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


if __name__ == "__main__":
    deg = int(sys.argv[1])
    print(render(implicit(deg, sys.argv[2:6])))
