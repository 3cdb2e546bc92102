import math
import os
import tempfile

import pytest

import weakhyp


def test_expr_eval():
    assert weakhyp.eval_expr("t^2 + 1", 3.0) == pytest.approx(10.0)
    assert weakhyp.eval_expr_derivative("t^3", 1, 2.0) == pytest.approx(12.0)
    with pytest.raises(weakhyp.SingularPointError):
        weakhyp.eval_expr_derivative("abs(t)^1", 1, 0.0)


def test_char_poly():
    import numpy as np

    b = weakhyp.char_poly(np.diag([1.0, 2.0]))
    assert b == pytest.approx([-3.0, 2.0])


def test_system_and_reduction():
    spec = weakhyp.parse_system(
        "m = 2\nn = 1\nT = 1\nalpha = 1\nA[1][2][1] = 1\nA[2][1][1] = t^2\n"
    )
    assert spec.m == 2 and spec.alpha == 1.0
    assert "A[1][2][1] = 1" in weakhyp.system_to_text(spec)

    import numpy as np

    xi = np.array([4.0])
    A, B = weakhyp.eval_system(spec, 0.5, xi)
    assert A[0, 1] == pytest.approx(4.0)
    assert A[1, 0] == pytest.approx(1.0)

    red = weakhyp.to_block_sylvester(spec)
    assert red.size == 4
    blk = red.block_A(0.5, xi)
    br = math.sqrt(17.0)
    assert blk[0, 1] == pytest.approx(br)


def test_eigen_and_energy():
    import numpy as np

    spec = weakhyp.parse_system(
        "m = 2\nn = 1\nT = 1\nalpha = 1\nA[1][2][1] = 1\nA[2][1][1] = t^2\n"
    )
    xi = np.array([256.0])
    field = weakhyp.compute_eigenvalues(spec, 1025, xi)
    lam = field.lambda_
    assert lam[-1, 1] == pytest.approx(256.0, rel=1e-6)  # t = T = 1
    assert weakhyp.estimate_holder(field, 1.0, 1) == pytest.approx(256.0, rel=1e-4)

    reg = weakhyp.mollify(field, 0.125, 1.0)
    assert reg.eps == 0.125
    red = weakhyp.to_block_sylvester(spec)
    q = weakhyp.energy_quantities(reg, red, 512, xi)
    assert q.q1 >= 0.0 and q.q3 > 0.0


def test_thresholds():
    assert weakhyp.gevrey_threshold(1.0, 2) == pytest.approx(2.0)
    assert weakhyp.gevrey_threshold(0.5, 3) == pytest.approx(1.5)
    assert weakhyp.gamma_exponent(1.0, 2) == pytest.approx(0.5)
    rows = weakhyp.threshold_rows([0.5, 1.0], [2, 3])
    assert len(rows) == 4
    assert all(float(r[4]) >= 0.0 for r in rows)


def test_builtins_listed():
    names = weakhyp.builtin_scenarios()
    assert "wave_t2" in names and "constant_strict" in names


def test_pipeline_smoke():
    with tempfile.TemporaryDirectory() as out:
        code, info = weakhyp.run_pipeline(
            "constant_strict", out, stages=["reduce"], jobs=2
        )
        assert code == 0, info
        assert os.path.exists(os.path.join(out, "manifest.json"))
