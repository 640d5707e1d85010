"""Extended-precision reference values frozen into the Rust test suites.

Run with `python3 oracles.py`; every value is computed by brute force
(direct series or adaptive quadrature at 40 digits) from the defining
formulas, never from the library under test.
"""
from mpmath import mp, mpf, gamma, quad, exp, beta, rf, factorial, pi, sin, inf

mp.dps = 40


def k_gamma(x, k):
    return quad(lambda m: m ** (x - 1) * exp(-m ** k / k), [0, 1, inf])


def k_poch(r, k, j):
    out = mpf(1)
    for i in range(j):
        out *= r + i * k
    return out


def ml_k(x, k, p, q, r, kdeformed, terms=400):
    total = mpf(0)
    for j in range(terms):
        den = k_gamma_closed(p * j + q, k) if kdeformed else gamma(p * j + q)
        total += k_poch(r, k, j) / den * mpf(x) ** j / factorial(j)
    return total


def k_gamma_closed(x, k):
    return mpf(k) ** (mpf(x) / k - 1) * gamma(mpf(x) / k)


def prabhakar(z, a, b, g, terms=40000):
    # the alternating series peaks near exp(|z|^(1/a)); carry enough digits to absorb it
    dps = 60 + int(1.3 * abs(z) ** (1.0 / a) / 2.302585)
    with mp.workdps(dps):
        total = mpf(0)
        term_num = mpf(1)
        z = mpf(z)
        for j in range(terms):
            t = term_num / gamma(a * j + b)
            total += t
            term_num *= (g + j) * z / (j + 1)
            if j > 50 and abs(t) < mpf(10) ** (-dps + 10) * abs(total):
                break
        return +total


def ext_beta(s, t, v, k, p, q, r, kdeformed):
    f = lambda m: m ** (mpf(s) / k - 1) * (1 - m) ** (mpf(t) / k - 1) * ml_k(
        -v * (m * (1 - m)) ** k, k, p, q, r, kdeformed, 80)
    return quad(f, [0, mpf(1) / 2, 1]) / k


def main():
    print("k_gamma(1,2) =", mp.nstr(k_gamma(1, 2), 20))
    print("ml_k(-0.25, k=2,p=q=r=1, kdef) =", mp.nstr(ml_k(mpf(-0.25), 2, 1, 1, 1, True), 25))
    th = quad(lambda u: 2 * exp(-(sin(u) ** 2) * (1 - sin(u) ** 2)), [0, pi / 2])
    print("int x^-1/2 (1-x)^-1/2 e^{-x(1-x)} =", mp.nstr(th, 25))
    print("ext_beta(1.5,2.5,v=1,k=2,p=q=r=1,kdef) =",
          mp.nstr(ext_beta(1.5, 2.5, 1, 2, 1, 1, 1, True), 25))
    print("ext_beta(1.5,2.5,v=1,k=1,p=q=r=1) =",
          mp.nstr(ext_beta(1.5, 2.5, 1, 1, 1, 1, 1, False), 25))
    print("ext_beta(2,2,v=1,k=1,p=q=r=1) =",
          mp.nstr(ext_beta(2, 2, 1, 1, 1, 1, 1, False), 25))
    print("mellin spot =", mp.nstr(gamma(0.5) * beta(1.5, 1.5), 25))
    for (z, a, b, g) in [(-5, 0.5, 1, 1), (-30, 0.75, 1.5, 0.75), (-12.5, 1.5, 0.75, 1.5),
                         (-100, 0.75, 1, 1), (-7, 1, 0.75, 1.5), (-250, 1.5, 1, 0.75),
                         (-2, 0.375, 0.375, 0.375), (-40, 1.5, 1.5, 1.0)]:
        print(f"prabhakar({z},{a},{b},{g}) =", mp.nstr(prabhakar(z, a, b, g), 25))
    # incomplete beta check value for the cdf example (s=2,t=3,v=1,k=p=q=l=1)
    f = lambda m: m * (1 - m) ** 2 * exp(-m * (1 - m))
    print("cdf(0.3; 2,3,1) =", mp.nstr(quad(f, [0, 0.3]) / quad(f, [0, 1]), 25))


def write_reduction_table(path):
    """Classical gamma on eta = 0.1, 0.2, ..., 30 and classical beta on a
    small (s, t) grid, 20 significant digits."""
    with open(path, "w") as out:
        out.write("# kind args... value\n")
        for i in range(1, 301):
            eta = mpf(i) / 10
            out.write(f"gamma {mp.nstr(eta, 4)} {mp.nstr(gamma(eta), 20)}\n")
        grid = ["0.3", "0.6", "1", "1.5", "2.5", "4", "7.25"]
        for s in grid:
            for t in grid:
                out.write(f"beta {s} {t} {mp.nstr(beta(mpf(s), mpf(t)), 20)}\n")


if __name__ == "__main__":
    import os
    import sys
    main()
    if "--write" in sys.argv:
        write_reduction_table(os.path.join(os.path.dirname(os.path.abspath(__file__)), "reductions.txt"))
