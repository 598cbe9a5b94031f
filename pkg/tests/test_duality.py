import pytest

from diagramalg.duality import DualityReport, verify_duality


class TestSmallFamilies:
    def test_gl_two_tensor_square(self):
        rep = verify_duality("glA", 2, 2)
        assert rep.dims == {"group_image": 10, "diagram_image": 2,
                            "commutant_of_diagram": 10, "commutant_of_group": 2}
        assert rep.equal_a and rep.equal_b
        assert rep.faithful is True
        assert rep.method == "exact"

    def test_gl_faithfulness_threshold(self):
        assert verify_duality("glA", 2, 2).faithful
        assert not verify_duality("glA", 2, 3).faithful

    def test_symplectic_defect_is_reported_not_hidden(self):
        rep = verify_duality("sp", 2, 2)
        assert rep.equal_a and rep.equal_b
        assert rep.dims["diagram_image"] == 2
        assert rep.faithful is False

    def test_orthogonal(self):
        rep = verify_duality("o", 3, 2)
        assert rep.equal_a and rep.equal_b
        assert rep.dims["diagram_image"] == 3
        assert rep.faithful is True

    def test_walled(self):
        rep = verify_duality("walled", 2, 1, 1)
        assert rep.equal_a and rep.equal_b
        assert rep.dims == {"group_image": 10, "diagram_image": 2,
                            "commutant_of_diagram": 10, "commutant_of_group": 2}
        assert rep.faithful is True

    def test_so_direct_strict_containment(self):
        rep = verify_duality("so-direct", 2, 1)
        assert rep.extra["so_commutant"] == 2
        assert rep.extra["o_commutant"] == 1
        assert rep.extra["proper_subalgebra"] is True
        assert rep.equal_a is None and rep.faithful is None


class TestReportShape:
    def test_json_keys(self):
        obj = verify_duality("glA", 2, 2).to_json_dict()
        assert set(obj) >= {"family", "n", "r", "s", "dims", "equal_a",
                            "equal_b", "faithful", "method", "elapsed_ms"}
        assert set(obj["dims"]) == {"group_image", "diagram_image",
                                    "commutant_of_diagram", "commutant_of_group"}
        assert obj["elapsed_ms"] is None

    def test_timing_flag(self):
        rep = verify_duality("glA", 2, 2, with_timing=True)
        assert isinstance(rep.elapsed_ms, int)

    def test_verified_property(self):
        assert verify_duality("glA", 2, 2).verified


class TestValidation:
    def test_odd_symplectic_rejected(self):
        with pytest.raises(ValueError):
            verify_duality("sp", 3, 2)

    def test_walled_needs_s(self):
        with pytest.raises(ValueError):
            verify_duality("walled", 2, 1)

    def test_s_rejected_elsewhere(self):
        with pytest.raises(ValueError):
            verify_duality("glA", 2, 2, 1)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            verify_duality("affine", 2, 2)
