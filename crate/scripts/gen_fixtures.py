#!/usr/bin/env python3
"""Generate NFQX newform fixtures with PARI/GP (through cypari2).

Each level gets one file `fixtures/<N>.nfqx` holding every newform orbit
for the listed characters. Coefficient fields are absolute number fields
(polredabs-reduced); for a nontrivial character the image of the PARI
root of unity is written on a `zeta` line and the values eps(p) on
`eps` lines. CM coefficient fields also get a `conj` line.

Usage: python3 scripts/gen_fixtures.py [OUTDIR] [LEVEL ...]
"""

import sys
from fractions import Fraction
from pathlib import Path

import cypari2

pari = cypari2.Pari()
pari.allocatemem(4 * 10**9)
pari.set_real_precision(60)

# level -> (characters, largest curve genus to verify at this level,
#           level whose dominating genus governs the precision)
# Characters are brace encodings; "1" is the trivial character.
LEVELS = {
    13: (["{2}"], 2, None),
    21: (["1", "{0,2}"], 3, None),
    26: (["1"], 2, None),
    35: (["1"], 3, None),
    36: (["1", "{0,2}"], 3, None),
    37: (["1"], 2, None),
    39: (["1"], 3, None),
    40: (["1", "{{0,0},2}"], 3, None),
    41: (["1"], 3, None),
    47: (["1"], 6, 94),
    48: (["1", "{{1,0},1}"], 3, None),
    50: (["1"], 2, None),
    52: (["1", "{0,4}"], 5, None),
    54: (["1"], 2, None),
    56: (["1"], 2, None),
    58: (["1"], 2, None),
    59: (["1"], 5, None),
    64: (["1", "{{0,8}}"], 3, None),
    66: (["1"], 2, None),
    71: (["1"], 6, None),
    72: (["1", "{{0,0},2}"], 3, None),
    80: (["1", "{{0,0},2}"], 3, None),
    84: (["1"], 2, None),
    88: (["1"], 3, None),
    90: (["1"], 2, None),
    91: (["1"], 2, None),
    94: (["1"], 6, None),
    95: (["1"], 3, None),
    96: (["1"], 2, None),
    104: (["1"], 3, None),
    112: (["1"], 2, None),
    116: (["1"], 3, None),
    119: (["1"], 4, None),
    128: (["1", "{{0,16}}"], 3, None),
    138: (["1"], 2, None),
    142: (["1"], 2, None),
    144: (["1", "{{0,0},2}"], 3, None),
    152: (["1"], 3, None),
    160: (["1", "{{1,0},1}"], 4, None),
    162: (["1"], 2, None),
    164: (["1"], 4, None),
    176: (["1"], 3, None),
    184: (["1"], 3, None),
    189: (["1"], 2, None),
    192: (["1"], 2, None),
    196: (["1"], 3, None),
    200: (["1"], 2, None),
    208: (["1", "{{0,0},4}"], 5, None),
    376: (["1"], 6, None),
}


def factor(n):
    return [(int(p), int(e)) for p, e in zip(*pari.factor(n))]


def parse_encoding(s):
    s = s.strip()[1:-1]
    out, i = [], 0
    while i < len(s):
        if s[i] == "{":
            j = s.index("}", i)
            a, b = s[i + 1 : j].split(",")
            out.append((int(a), int(b)))
            i = j + 1
        elif s[i] == ",":
            i += 1
        else:
            j = s.find(",", i)
            j = len(s) if j < 0 else j
            out.append(int(s[i:j]))
            i = j
    return out


def local_angle(p, a, e, n):
    """eps_p(n) as a fraction of a full turn (n a unit)."""
    pa = p**a
    r = n % pa
    if p == 2 and a > 2:
        s = 0 if r % 4 == 1 else 1
        rr = r if s == 0 else (-r) % pa
        t = next(t for t in range(2 ** (a - 2)) if pow(5, t, pa) == rr)
        return Fraction(e[0] * s, 2) + Fraction(e[1] * t, 2 ** (a - 2))
    if p == 2:
        return Fraction(e * (0 if r == 1 else 1), 2) if a == 2 else Fraction(0)
    phi = (p - 1) * p ** (a - 1)
    g = next(g for g in range(2, pa) if int(pari(f"znorder(Mod({g},{pa}))")) == phi)
    t = next(t for t in range(phi) if pow(g, t, pa) == r)
    return Fraction(e * t, phi)


def conrey_index(N, enc):
    """Conrey index of the character with the given encoding."""
    fac = factor(N)
    units = [n for n in range(1, N) if pari.gcd(n, N) == 1]
    want = {n: sum((local_angle(p, a, e, n) for (p, a), e in zip(fac, enc)), Fraction(0)) % 1 for n in units}
    G = pari(f"znstar({N},1)")
    for c in units:
        chi = pari.znconreylog(G, c)
        if all(Fraction(str(pari.chareval(G, chi, n))) == want[n] for n in units):
            return c
    raise ValueError(f"no Conrey index for {N} {enc}")


def genus_x_h(N, conreys):
    """Genus of X_H, H the common kernel of the given characters."""
    G = pari(f"znstar({N},1)")
    units = [n for n in range(1, N) if pari.gcd(n, N) == 1]
    chis = [pari.znconreylog(G, c) for c in conreys]
    H = [n for n in units if all(pari.chareval(G, x, n) == 0 for x in chis)]
    total = 0
    for c in units:
        chi = pari.znconreylog(G, c)
        if all(pari.chareval(G, chi, h) == 0 for h in H):
            total += int(pari(f"mfdim([{N},2,Mod({c},{N})],1)"))
    return total


def rat(c):
    return str(Fraction(str(c)))


def coords(v, var, n):
    pol = pari.lift(v) if str(pari.type(v)) == "t_POLMOD" else v
    return [rat(pari.polcoef(pol, i, var)) for i in range(n)]


def orbit_blocks(N, enc_str, B):
    trivial = enc_str == "1"
    if trivial:
        c = 1
        enc_text = None
    else:
        c = conrey_index(N, parse_encoding(enc_str))
        enc_text = enc_str
    mf = pari(f"mfinit([{N},2,Mod({c},{N})],0)")
    if int(pari.mfdim(mf)) == 0:
        return []
    G = pari(f"znstar({N},1)")
    order = int(pari.charorder(G, pari.znconreylog(G, c)))
    cyc = pari.mfparams(mf)[4]
    forms = pari.mfeigenbasis(mf)
    fields = pari.mffields(mf)
    blocks = []
    y = pari("y")
    t = pari("t")
    for f, rel in zip(forms, fields):
        coefs = pari.mfcoefs(f, B)
        rel_l = pari.liftall(rel)
        if pari.poldegree(cyc, t) <= 1:
            troot = -pari.polcoef(cyc, 0, t) / pari.polcoef(cyc, 1, t) if pari.poldegree(cyc, t) == 1 else pari(1)
            P = pari.substpol(rel_l, t, troot) if pari.poldegree(cyc, t) == 1 else rel_l
            if pari.poldegree(P, y) == 0:
                P = y
            P = P / pari.pollead(P, y)

            def to_abs(v, P=P, troot=troot):
                w = pari.liftall(v)
                w = pari.subst(w, t, troot)
                return pari.Mod(w, P)

            a_t = None
        else:
            nf = pari.nfinit(cyc)
            if pari.poldegree(rel_l, y) == 0:
                rel_l = y
            P, a_t, k = pari.rnfequation(nf, rel_l, 1)
            beta = pari.Mod(y, P) - k * a_t

            def to_abs(v, P=P, a_t=a_t, beta=beta):
                w = pari.liftall(v)
                return pari.subst(pari.subst(w, y, beta), t, a_t)

        red = pari.polredabs(P, 1)
        Q, r = red[0], pari.lift(red[1])
        d = int(pari.poldegree(Q, y))

        def fin(v, Q=Q, r=r):
            w = pari.lift(v) if str(pari.type(v)) == "t_POLMOD" else v
            return pari.Mod(pari.subst(w, y, r), Q)

        an = [fin(to_abs(coefs[n])) for n in range(B + 1)]
        zeta = fin(a_t) if a_t is not None else None
        lines = [f"level {N}"]
        lines.append(f"char {N} {enc_text}" if enc_text else f"char {N} {trivial_text(N)}")
        lines.append(f"field {d} : " + " ".join(rat(pari.polcoef(Q, i, y)) for i in range(d + 1)))
        if order > 2:
            lines.append(f"zeta {order} : " + " ".join(coords(zeta, y, d)))
        if int(pari.polsturm(Q)) < d:
            lines.append("conj : " + " ".join(coords(complex_conjugation(Q), y, d)))
        lines.append(f"precision {B}")
        if order > 2:
            chi = pari.znconreylog(G, c)
            for p in primes_up_to(B):
                if N % p == 0:
                    continue
                k = int(Fraction(str(pari.chareval(G, chi, p))) * order)
                ep = zeta**k
                lines.append(f"eps {p} : " + " ".join(coords(ep, y, d)))
                if p * p <= B:
                    lhs = an[p * p]
                    rhs = an[p] ** 2 - p * ep
                    assert lhs == rhs, f"eps orientation check failed at {N}, p = {p}"
        assert an[1] == pari.Mod(1, Q)
        for n in [1] + primes_up_to(B):
            lines.append(f"a {n} : " + " ".join(coords(an[n], y, d)))
        blocks.append("\n".join(lines))
    return blocks


def trivial_text(N):
    parts = []
    for p, a in factor(N):
        parts.append("{0,0}" if p == 2 and a > 2 else "0")
    return "{" + ",".join(parts) + "}"


def complex_conjugation(Q):
    y = pari("y")
    roots = pari.polroots(Q)
    for s in pari.nfgaloisconj(Q):
        if all(abs(pari.subst(s, y, r) - pari.conj(r)) < 1e-8 for r in roots):
            return pari.Mod(s, Q)
    raise ValueError(f"no complex conjugation found for {Q}")


def primes_up_to(B):
    return [int(p) for p in pari.primes([2, B])]


def precision_for(N, chars, G, govern):
    M = govern or N
    conreys = [1 if e == "1" else conrey_index(N, parse_encoding(e)) for e in chars]
    if govern:
        conreys = [1]
    gy = genus_x_h(M, conreys)
    d = 2 * G + 2
    c = (2 * gy - 2) * max(6, d) + 1
    return c + 8 * G + 10, gy


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
    out.mkdir(parents=True, exist_ok=True)
    levels = [int(a) for a in sys.argv[2:]] or sorted(LEVELS)
    for N in levels:
        chars, G, govern = LEVELS[N]
        B, gy = precision_for(N, chars, G, govern)
        blocks = []
        for e in chars:
            blocks.extend(orbit_blocks(N, e, B))
        header = f"# level {N}: newform orbits from PARI/GP {pari('version()')}, g_Y = {gy}\n"
        (out / f"{N}.nfqx").write_text(header + "\n\n".join(blocks) + "\n")
        print(N, "orbits:", len(blocks), "precision:", B, flush=True)


if __name__ == "__main__":
    main()
