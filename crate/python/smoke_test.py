"""Smoke test for the compiled extension: python python/smoke_test.py"""

import permtri


def main():
    f = permtri.Field(3)
    assert f.q == 8 and f.modulus == 0xB
    for x in range(1, 8):
        assert f.mul(x, f.inv(x)) == 1
    assert sum(f.trace(x) == 0 for x in range(8)) == 4
    for c in range(8):
        roots = f.solve_quadratic(1, 1, c)
        assert len(roots) == (2 if f.trace(c) == 0 else 0)

    t = permtri.Trinomials(3)
    assert t.q == 8 and t.pair_count == 3969
    one, zero = (1, 0), (0, 0)
    assert t.is_pp_bruteforce(one, one) and t.is_perm_mu(one, one)
    cls = t.classify(one, one)
    assert cls["condition"] == "COND1" and cls["case_id"] == 3, cls
    report = t.verify_pair(one, one)
    assert report["consistent"], report
    assert t.split(one, one)["split_type"] == "NOT_SPLIT_NONRATIONAL"
    assert t.count_points_off_diagonal(one, one) == 0
    assert len(t.curve_coeffs(one, one)) == 3

    summary, pairs = t.enumerate("bruteforce")
    assert summary["mismatches"] == 0 and summary["pp_count"] == len(pairs) == 63

    try:
        t.classify(zero, one)
    except ValueError:
        pass
    else:
        raise AssertionError("zero coefficient accepted")

    reports = permtri.symbolic("curve")
    assert all(r["verdict"] == "pass" for r in reports)
    print("smoke test passed")


if __name__ == "__main__":
    main()
