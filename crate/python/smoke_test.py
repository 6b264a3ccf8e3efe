"""Smoke test for the `workbench` extension module.

Build and install first:

    pip install maturin
    pip install --no-build-isolation -e crates/py
    python python/smoke_test.py
"""

import workbench

PING_PONG = """\
states: q0 q1 halt
start: q0
blank: _
tape_alphabet: _ 1
input_alphabet: 1
halt: halt
delta: q0 _ -> q1 _ R
delta: q1 _ -> q0 _ L
"""


def main():
    m = workbench.Machine(PING_PONG)
    d = m.detect()
    assert (d["outcome"], d["first"], d["repeat"]) == ("self-termination", 0, 2), d
    assert m.decide_space_bounded(2) == ("loops", 0, 2)
    assert m.run(budget=5)[0] == "budget-exhausted"

    mul = workbench.RecTerm("mul")
    assert mul.arity == 2 and mul.eval([6, 7]) == 42
    result, witnesses = workbench.RecTerm("(mu sub)").mu([3])
    assert result == 3 and [v for _, v in witnesses] == [3, 2, 1, 0]
    assert workbench.RecTerm("(mu (comp (succ) (proj 2 2)))").mu([0], budget=100) is None

    assert workbench.encode_formula("(= 0 0)") == 2**9 * 3**1 * 5**1
    assert workbench.decode_formula(7680) == "(= 0 0)"
    assert workbench.decode_proof(1) == []
    try:
        workbench.decode_formula(7)
    except ValueError:
        pass
    else:
        raise AssertionError("7 is not a formula code")

    target = "(not (= 0 (s (var 2))))"
    found = workbench.proof_search(target)
    assert found is not None
    x, text = found
    assert workbench.check_proof(text)[0]
    assert workbench.encode_proof_text(text) == x
    assert workbench.xby(x, workbench.encode_formula(target))
    assert not workbench.xby(x + 1, workbench.encode_formula(target))

    r = workbench.run_theorem_one(3, "(= 0 (s (var 2)))", g="sub")
    assert (r.verdict, r.case, r.y) == ("ZeroFound", "Q1", 3)
    assert workbench.fairness_audit(r.trace()) <= 1
    r = workbench.run_theorem_one(2, "(imp (= (var 1) (var 2)) (imp (= 0 0) (= (var 1) (var 2))))",
                                  g="(comp (succ) (proj 2 2))")
    assert r.verdict == "ProofFound" and r.x is not None

    table = workbench.run_suite()
    assert table.splitlines()[0].split() == ["instance", "verdict", "y*/x", "t1-steps", "t2-steps", "ticks"]
    assert len(table.splitlines()) == 12
    print("smoke test passed")


if __name__ == "__main__":
    main()
