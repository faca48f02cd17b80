"""Smoke test for the pyddbar extension module.

Build and install first:
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/pyddbar-*.whl
"""

import sys
from pathlib import Path

import pyddbar

FIXTURES = Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"


def check(cond, what):
    if not cond:
        print(f"FAIL {what}")
        sys.exit(1)
    print(f"ok   {what}")


def main():
    t2 = pyddbar.builtin("torus:2")
    check(t2.betti == [1, 4, 6, 4, 1], "torus betti")
    check(t2.is_ddbar(), "torus is ddbar")

    iw = pyddbar.builtin("iwasawa")
    check(iw.delta() == [0, 2, 6, 8, 6, 2, 0], "iwasawa delta")
    check(not iw.is_ddbar(), "iwasawa is not ddbar")

    blown = pyddbar.blow_up(pyddbar.builtin("torus:3"), pyddbar.builtin("torus:1"), 2)
    golden = (FIXTURES / "blowup_t3_t1.ddm").read_text()
    check(blown.to_ddm() == golden, "blow-up matches checked-in model")
    check(pyddbar.from_ddm(golden) == blown, "ddm round trip")

    p = pyddbar.projectivize(iw, 2)
    check(p.delta() == pyddbar.delta_projectivize(iw.delta(), 2), "projective bundle routes agree")

    ambient, codim = pyddbar.heredity_lift(iw, 2, 3)
    check(codim == 5 and not ambient.is_ddbar(), "heredity lift")

    s = pyddbar.ce_compute((FIXTURES / "kodaira-thurston.ceq").read_text())
    check(s["bott_chern"] == [[1, 1, 1], [1, 3, 2], [1, 2, 1]], "kodaira-thurston bott-chern")
    check(s["verdict"] is False, "kodaira-thurston verdict")

    check(pyddbar.construct("proj(builtin:point, rank=3)").betti == [1, 0, 1, 0, 1], "construct")
    check(pyddbar.rank([[1, 2], [2, 4]]) == 1, "exact rank")

    passed, checked, failures = pyddbar.run_suite("route-independence", seed=7, count=50)
    check(passed and checked == 100 and not failures, "route-independence suite")

    try:
        pyddbar.blow_up(t2, pyddbar.builtin("torus:1"), 1)
    except ValueError as e:
        check("codim-too-small" in str(e), "codim error surfaces as ValueError")
    else:
        check(False, "codim error surfaces as ValueError")

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
