"""Small builders shared by the test modules."""

from fractions import Fraction as F

from tempera.jordan import AdmissibleTriple, EpsilonMap, JordanBlocks, Reducibility

RED, IRR = Reducibility.REDUCES, Reducibility.IRREDUCIBLE


def mk(cat, cusp: str, single: dict | None = None, pair: dict | None = None, blocks: dict | None = None):
    """Triple from ids: single {("r1", 3): -1}, pair {("r1", 1, 3): -1}, blocks {"r1": [1, 3]}."""
    jb = {}
    for (r, a) in (single or {}):
        jb.setdefault(cat.rho(r), set()).add(a)
    for (r, a, b) in (pair or {}):
        jb.setdefault(cat.rho(r), set()).update((a, b))
    for r, bs in (blocks or {}).items():
        jb.setdefault(cat.rho(r), set()).update(bs)
    eps = EpsilonMap({(cat.rho(r), a): v for (r, a), v in (single or {}).items()},
                     {(cat.rho(r), a, b): v for (r, a, b), v in (pair or {}).items()})
    return AdmissibleTriple(JordanBlocks(jb), cat.cusp(cusp), eps)


def reducibility_matrix(cat):
    """(case, triple, rho id, alpha, expected) rows, each case covered at least twice."""
    return [
        ("ii", mk(cat, "s0"), "r1", F(1, 3), IRR),
        ("ii", mk(cat, "s0", {("r1", 1): 1}), "r1", F(5, 7), IRR),
        ("ii", mk(cat, "s0"), "c", F(1, 2), IRR),
        ("ii", mk(cat, "s0"), "c", 0, IRR),
        ("iii", mk(cat, "s0"), "r1", 0, RED),
        ("iii", mk(cat, "s0", {("r1", 1): -1}), "r1", 0, IRR),
        ("iii", mk(cat, "s0", {("r2", 2): 1}), "r2", 0, IRR),
        ("iii", mk(cat, "s1", blocks={"r1": [1, 3], "r2": [2]}, single={("r2", 2): -1},
                   pair={("r1", 1, 3): -1}), "r1", 0, IRR),
        ("iv", mk(cat, "s0"), "r2", F(3, 2), IRR),
        ("iv", mk(cat, "s0", {("r1", 1): 1}), "r1", 2, IRR),
        ("iv", mk(cat, "s0", {("r2", 4): 1}), "r2", F(3, 2), IRR),
        ("v", mk(cat, "s0", {("r1", 1): 1}), "r1", 1, RED),
        ("v", mk(cat, "s0", {("r1", 5): -1}), "r1", 3, RED),
        ("v", mk(cat, "s0", {("r2", 2): -1, ("r2", 6): 1}), "r2", F(7, 2), RED),
        ("vi", mk(cat, "s0", {("r2", 2): 1, ("r2", 4): 1}), "r2", F(3, 2), RED),
        ("vi", mk(cat, "s0", {("r2", 2): 1, ("r2", 4): -1}), "r2", F(3, 2), IRR),
        ("vi", mk(cat, "s0", {("r1", 1): -1, ("r1", 3): -1}), "r1", 1, RED),
        ("vi", mk(cat, "s2", pair={("r3", 1, 3): -1}), "r3", 1, IRR),
        ("vi", mk(cat, "s2", pair={("r3", 1, 3): 1}), "r3", 1, RED),
        ("vii", mk(cat, "s0"), "r2", F(1, 2), RED),
        ("vii", mk(cat, "s0", {("r2", 2): 1}), "r2", F(1, 2), RED),
        ("vii", mk(cat, "s0", {("r2", 2): -1}), "r2", F(1, 2), IRR),
        ("vii", mk(cat, "s0"), "r1", F(1, 2), IRR),
    ]


ACCEPTANCE: dict = {}


def record(n: int, ok: bool, detail: str) -> None:
    """Remember one acceptance verdict; conftest prints them after the run."""
    line = "acceptance %d: %s  %s" % (n, "PASS" if ok else "FAIL", detail)
    ACCEPTANCE[n] = line
    print(line)
