#!/usr/bin/env python3
"""Regenerate data/instances/*.json.

quadric-net: blowup of P^3 at the 8 base points of a general net of quadrics.
N^1 basis H, E1..E8; N_1 basis l, e1..e8; H.l = 1, E_i.e_i = -1.
"""
import itertools
import json
import pathlib
from fractions import Fraction as Q

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "instances"


def s(x):
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec(v):
    return [s(x) for x in v]


def mat(m):
    return [vec(r) for r in m]


def dump(name, doc):
    OUT.mkdir(parents=True, exist_ok=True)
    text = json.dumps(doc, indent=1, ensure_ascii=False)
    (OUT / f"{name}.json").write_text(text + "\n", encoding="utf-8")


def toy_vertical():
    return {
        "rank": 2,
        "divisor_basis": ["x1", "x2"],
        "curve_basis": ["F1", "F2"],
        "pairing": mat([[1, 0], [0, 1]]),
        "canonical_class": vec([0, 0]),
        "iitaka_dim": 2,
        "fibre_class": vec([1, 1]),
        "fibral_classes": [vec([1, 0]), vec([0, 1])],
        "vertical_divisors": [vec([-1, 1]), vec([1, -1])],
        "partition": [[0, 1]],
        "multiplicities_m": [1, 1],
        "pullback_coeffs_mu": vec([1, 1]),
        "ample_pullbacks": [],
        "k_negative_rays": [],
        "flop_rule": {"explicit": []},
        "seed_chamber": {"wall_frame": [vec([1, 0]), vec([0, 1])], "blocks": [[0, 1]]},
        "group_generators": [],
        "metadata": {
            "description": "relative model over a curve with one reducible fibre F = F1 + F2",
            "default_sigma": "1,0;0,1",
        },
        "is_relative": True,
    }


def i2_chain():
    return {
        "rank": 2,
        "divisor_basis": ["x1", "x2"],
        "curve_basis": ["f", "c"],
        "pairing": mat([[1, 0], [0, 1]]),
        "canonical_class": vec([0, 0]),
        "iitaka_dim": 2,
        "fibre_class": vec([1, 0]),
        "fibral_classes": [],
        "vertical_divisors": [],
        "partition": [],
        "multiplicities_m": [],
        "pullback_coeffs_mu": [],
        "ample_pullbacks": [],
        "k_negative_rays": [],
        "flop_rule": {"reflection_form": mat([[0, 0], [0, -2]])},
        "seed_chamber": {"wall_frame": [vec([0, 1]), vec([1, -1])], "blocks": [[0, 1]]},
        "group_generators": [
            {
                "matrix": mat([[1, 0], [1, 1]]),
                "label": "tau",
                "provenance": "translation x2/x1 -> x2/x1 + 1 along the chain of I2 walls",
            }
        ],
        "metadata": {
            "description": "infinite chain of I2 flopping walls x2 = k x1 with a translation",
            "default_sigma": "1,0;1,5",
        },
        "is_relative": True,
    }


def quadric_net():
    n = 9
    P = [[0] * n for _ in range(n)]
    P[0][0] = 1
    for i in range(1, n):
        P[i][i] = -1

    def curve(a, es):
        v = [Q(0)] * n
        v[0] = Q(a)
        for i, c in es.items():
            v[i] = Q(c)
        return v

    F = curve(4, {i: -1 for i in range(1, 9)})
    K = [Q(-4)] + [Q(2)] * 8
    T = [Q(2)] + [Q(-1)] * 8

    frame, blocks = [], []
    for i, j in itertools.combinations(range(1, 9), 2):
        c = curve(1, {i: -1, j: -1})
        frame.append(c)
        frame.append([F[k] - c[k] for k in range(n)])
        blocks.append([len(frame) - 2, len(frame) - 1])

    form = [[Q(0)] * n for _ in range(n)]
    form[0][0] = Q(2, 3)
    for i in range(1, n):
        form[i][i] = Q(-4, 3)

    def generator(t):
        # Adjoint on curves: l -> l (+F when t is half-integral), e_i -> e_i + (shift - t_i) F.
        half = Q(t[0]).denominator == 2
        shift = Q(1, 2) if half else Q(0)
        G = [[Q(int(r == c)) for c in range(n)] for r in range(n)]
        if half:
            for r in range(n):
                G[r][0] += F[r]
        for i in range(8):
            for r in range(n):
                G[r][i + 1] += (shift - Q(t[i])) * F[r]
        # M^T = P G P^{-1}; P is diagonal with entries +-1.
        M = [[P[c][c] * G[c][r] * P[r][r] for c in range(n)] for r in range(n)]
        return M

    gens = []
    h = [Q(1, 2)] * 4 + [Q(-1, 2)] * 4
    gens.append(("h", h))
    for i in range(1, 7):
        t = [Q(0)] * 8
        t[i], t[i + 1] = Q(1), Q(-1)
        gens.append((f"a{i + 1}{i + 2}", t))

    kneg = []
    for i in range(1, 9):
        e = curve(0, {i: 1})
        E = [0] * n
        E[i] = 1
        kneg.append({"curve": vec(e), "mori_type": 2, "exceptional_divisor": vec(E)})
    for i in range(1, 9):
        kneg.append({"curve": vec(curve(1, {i: -1})), "mori_type": "fibre"})

    return {
        "rank": n,
        "divisor_basis": ["H"] + [f"E{i}" for i in range(1, 9)],
        "curve_basis": ["l"] + [f"e{i}" for i in range(1, 9)],
        "pairing": mat(P),
        "canonical_class": vec(K),
        "iitaka_dim": 2,
        "fibre_class": vec(F),
        "fibral_classes": [],
        "vertical_divisors": [],
        "partition": [],
        "multiplicities_m": [],
        "pullback_coeffs_mu": [],
        "ample_pullbacks": [vec(T)],
        "k_negative_rays": kneg,
        "flop_rule": {"reflection_form": mat(form)},
        "seed_chamber": {"wall_frame": [vec(c) for c in frame], "blocks": blocks},
        "group_generators": [
            {
                "matrix": mat(generator(t)),
                "label": label,
                "provenance": "Mordell-Weil translation; gamma-shift " + ",".join(s(x) for x in t)
                + " in the E7 lattice {t in Z^8 or (Z+1/2)^8, sum t = 0}",
            }
            for label, t in gens
        ],
        "metadata": {
            "description": "blowup of P^3 in the 8 base points of a general net of quadrics; "
            "elliptic fibration over P^2 given by -K/2 = 2H - sum E",
            "walls": "c_ij = l - e_i - e_j and F - c_ij, one I2 fibre per pair i<j",
            "default_sigma": "4,-3,-3,0,0,0,0,0,0;4,0,0,-3,-3,0,0,0,0;4,0,0,0,0,-3,-3,0,0;4,-3,0,-3,0,0,0,0,0;"
            + ";".join(",".join(["4"] + ["1" if j == i else "0" for j in range(8)]) for i in range(8)),
        },
        "is_relative": False,
    }


if __name__ == "__main__":
    dump("toy-vertical", toy_vertical())
    dump("i2-chain", i2_chain())
    dump("quadric-net", quadric_net())
