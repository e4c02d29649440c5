#!/usr/bin/env python3
"""Build fixtures/newforms.csv from PARI/GP (via cypari).

For each level N the weight 2 new space of Gamma_0(N) is split into Galois
orbits. Per orbit we record the dimension, CM by an imaginary quadratic field
(a_p = 0 at every inert prime p < CM_PRIME_BOUND, read off the q-expansion) and the Atkin-Lehner sign at
each maximal prime power dividing N.

    python3 scripts/make_newform_fixture.py --levels-from levels.txt --out fixtures/newforms.csv

Levels already present in the output are skipped, so an interrupted run can be
resumed.
"""

import argparse
import csv
import os
import sys
import time

from cypari import pari

CM_PRIME_BOUND = 100
HEADER = ["level", "label", "dim", "is_cm", "cm_disc", "al_signs"]


def letters(i):
    s = ""
    while True:
        s = chr(ord("a") + i % 26) + s
        i //= 26
        if i == 0:
            return s


def prime_powers(n):
    f = pari.factor(n)
    return [(int(p), int(e)) for p, e in zip(f[0], f[1])]


def cm_candidates(n):
    out = []
    for d in range(3, n + 1):
        if n % d == 0 and pari.isfundamental(-d):
            out.append(-d)
    return out


def eigenvalue(mat, v, j):
    w = mat * v
    return w[j] / v[j]


def sign(ev, what):
    ev = pari.lift(ev)
    if ev not in (1, -1):
        raise RuntimeError(f"{what}: Atkin-Lehner eigenvalue {ev}")
    return int(ev)


def al_signs(n, v, j, a, w):
    # W_q is slow in PARI when n/q is large; there use eps_q = eps_n * eps_(n/q).
    # At p || n, eps_p = -a_p.
    signs = {}
    eps_n = None
    for p, e in prime_powers(n):
        q = p ** e
        if q == n:
            signs[q] = sign(eigenvalue(w(n), v, j), f"level {n}, W_{n}")
        elif e == 1:
            signs[q] = sign(-a(p), f"level {n}, U_{p}")
        elif q * q >= n:
            signs[q] = sign(eigenvalue(w(q), v, j), f"level {n}, W_{q}")
        else:
            if eps_n is None:
                eps_n = sign(eigenvalue(w(n), v, j), f"level {n}, W_{n}")
            signs[q] = eps_n * sign(eigenvalue(w(n // q), v, j), f"level {n}, W_{n // q}")
    return signs


def orbits(n):
    mf = pari.mfinit([n, 2], 0)
    if int(pari.mfdim(mf)) == 0:
        return []
    vf, vk = pari.mfsplit(mf, 0, 0)
    vecs = [pari.Col(col) for col in vf]
    pivots = [next(j for j in range(len(v)) if v[j] != 0) for v in vecs]

    primes = [int(p) for p in pari.primes([2, CM_PRIME_BOUND]) if n % int(p) != 0]
    discs = cm_candidates(n)
    inert = {d: [p for p in primes if pari.kronecker(d, p) == -1] for d in discs}
    basis = pari.mfcoefs(mf, CM_PRIME_BOUND)

    atkin = {}

    def w(q):
        if q not in atkin:
            atkin[q] = pari.mfatkininit(mf, q)[1]
        return atkin[q]

    out = []
    for i, (v, j) in enumerate(zip(vecs, pivots)):
        f = basis * v
        a = lambda p: f[p] / f[1]
        cm = None
        for d in discs:
            if inert[d] and all(a(p) == 0 for p in inert[d]):
                cm = d
                break
        signs = al_signs(n, v, j, a, w)
        out.append({
            "level": n,
            "label": f"{n}.2.{letters(i)}",
            "dim": int(pari.poldegree(vk[i])),
            "is_cm": "true" if cm else "false",
            "cm_disc": "" if cm is None else cm,
            "al_signs": ";".join(f"{q}:{'+' if s > 0 else '-'}" for q, s in sorted(signs.items())),
        })
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--levels-from", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--stack", type=int, default=4 * 10**9)
    args = ap.parse_args()

    pari.allocatemem(args.stack, silent=True)
    with open(args.levels_from) as f:
        levels = sorted({int(x) for x in f.read().split()})

    done = {}
    if os.path.exists(args.out):
        with open(args.out) as f:
            for row in csv.DictReader(f):
                done.setdefault(int(row["level"]), []).append(row)

    for n in levels:
        if n in done or n == 1:
            continue
        t = time.time()
        done[n] = orbits(n)
        print(f"{n}: {len(done[n])} orbits, {time.time() - t:.1f}s", file=sys.stderr, flush=True)
        write(args.out, done)
    write(args.out, done)


def write(path, done):
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as f:
        w = csv.DictWriter(f, HEADER, lineterminator="\n")
        w.writeheader()
        for n in sorted(done):
            for row in done[n]:
                w.writerow(row)
    os.replace(tmp, path)


if __name__ == "__main__":
    main()
