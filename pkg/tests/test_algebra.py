import json

import pytest

from exactcat.algebra import AlgebraError, FDAlgebra, load_algebra, parse_relation
from exactcat import testbeds


class TestBuild:
    def test_a2_dimension(self):
        alg = testbeds.a2()
        assert alg.dim == 3  # e1, e2, one arrow

    def test_single_vertex_base_field(self):
        alg = FDAlgebra(2, 1, [])
        assert alg.dim == 1

    def test_loop_modulo_square(self):
        alg = testbeds.loop_nilpotent()
        assert alg.dim == 2  # e, x

    def test_a3_dimension(self):
        assert testbeds.a3().dim == 6  # 3 trivial + 2 arrows + 1 composite

    def test_a3_zero_relation_dimension(self):
        assert testbeds.a3_zero_relation().dim == 5

    def test_commuting_square_dimension(self):
        assert testbeds.commuting_square().dim == 9

    def test_infinite_dimensional_rejected(self):
        with pytest.raises(AlgebraError, match="infinite"):
            FDAlgebra(2, 1, [(0, 0)], max_path_len=8)

    def test_scaled_relation_f3(self):
        alg = FDAlgebra(3, 1, [(0, 0)], ["2*x*x"], arrow_names=["x"])
        assert alg.dim == 2

    def test_relation_dropped_when_coeff_vanishes(self):
        # 2*x*x + x*x = 0 mod 3: no constraint, quotient is infinite
        with pytest.raises(AlgebraError):
            FDAlgebra(3, 1, [(0, 0)], ["2*x*x + x*x"], arrow_names=["x"], max_path_len=6)


class TestRelationValidation:
    def test_short_path_rejected(self):
        with pytest.raises(AlgebraError, match="admissible"):
            FDAlgebra(2, 1, [(0, 0)], ["x"], arrow_names=["x"])

    def test_inhomogeneous_rejected(self):
        with pytest.raises(AlgebraError, match="length"):
            FDAlgebra(2, 1, [(0, 0)], ["x*x*x - x*x"], arrow_names=["x"])

    def test_non_parallel_rejected(self):
        with pytest.raises(AlgebraError):
            FDAlgebra(
                2, 3, [(0, 1), (1, 2), (0, 1)], ["a*b - c"], arrow_names=["a", "b", "c"]
            )

    def test_non_composable_rejected(self):
        with pytest.raises(AlgebraError):
            FDAlgebra(2, 3, [(0, 1), (0, 1)], ["a*b"], arrow_names=["a", "b"])

    def test_unknown_arrow_name(self):
        with pytest.raises(AlgebraError, match="unknown arrow"):
            parse_relation("a*zz", {"a": 0}, 2)


class TestDistinguishedModules:
    def test_a2_projectives(self):
        alg = testbeds.a2()
        assert alg.projective(0).dims == (1, 1)
        assert alg.projective(1).dims == (0, 1)

    def test_a2_injectives(self):
        alg = testbeds.a2()
        assert alg.injective(0).dims == (1, 0)
        assert alg.injective(1).dims == (1, 1)

    def test_loop_projective_satisfies_relation(self):
        alg = testbeds.loop_nilpotent()
        proj = alg.projective(0)
        assert proj.dims == (2,)
        assert proj.satisfies_relations()
        assert proj.act[0].rank() == 1

    def test_zero_relation_projective(self):
        alg = testbeds.a3_zero_relation()
        assert alg.projective(0).dims == (1, 1, 0)
        proj = testbeds.a3().projective(0)
        assert proj.dims == (1, 1, 1)

    def test_commuting_square_projective(self):
        proj = testbeds.commuting_square().projective(0)
        assert proj.dims == (1, 1, 1, 1)
        assert proj.satisfies_relations()

    def test_simples(self):
        alg = testbeds.a3()
        for i in range(3):
            s = alg.simple(i)
            assert s.total_dim == 1 and s.dims[i] == 1


class TestOpposite:
    def test_involution_is_identity_object(self):
        alg = testbeds.a3()
        assert alg.opposite.opposite is alg

    def test_opposite_arrows_reversed(self):
        alg = testbeds.a2()
        assert alg.opposite.arrows == [(1, 0)]

    def test_opposite_relations(self):
        alg = testbeds.a3_zero_relation()
        op = alg.opposite
        assert op.dim == alg.dim
        assert op.relations == [[(1, (1, 0))]]


class TestSpecFiles:
    def test_toml_round_trip(self, tmp_path):
        spec = tmp_path / "alg.toml"
        spec.write_text(
            """
[field]
p = 2

[quiver]
vertices = 2
arrows = [["a", 1, 2]]

[bounds]
dim = 4
"""
        )
        alg = load_algebra(spec)
        assert alg.dim == 3
        assert alg.file_bounds == {"dim": 4}

    def test_json_round_trip(self, tmp_path):
        spec = tmp_path / "alg.json"
        spec.write_text(
            json.dumps(
                {
                    "field": {"p": 2},
                    "quiver": {"vertices": 1, "arrows": [["x", 1, 1]]},
                    "relations": ["x*x"],
                }
            )
        )
        assert load_algebra(spec).dim == 2

    def test_malformed_toml(self, tmp_path):
        spec = tmp_path / "bad.toml"
        spec.write_text("[field\np = 2")
        with pytest.raises(AlgebraError, match="invalid TOML"):
            load_algebra(spec)

    def test_missing_field(self, tmp_path):
        spec = tmp_path / "bad.json"
        spec.write_text("{}")
        with pytest.raises(AlgebraError, match="malformed"):
            load_algebra(spec)

    def test_vertex_range_checked(self, tmp_path):
        spec = tmp_path / "bad2.json"
        spec.write_text(
            json.dumps({"field": {"p": 2}, "quiver": {"vertices": 2, "arrows": [[1, 5]]}})
        )
        with pytest.raises(AlgebraError, match="vertices outside"):
            load_algebra(spec)

    def test_non_prime_field(self, tmp_path):
        spec = tmp_path / "bad3.json"
        spec.write_text(
            json.dumps({"field": {"p": 6}, "quiver": {"vertices": 1, "arrows": []}})
        )
        with pytest.raises(Exception, match="prime"):
            load_algebra(spec)

    def test_spec_hash_stable(self):
        assert testbeds.a2().spec_hash() == testbeds.a2().spec_hash()
        assert testbeds.a2().spec_hash() != testbeds.a3().spec_hash()
