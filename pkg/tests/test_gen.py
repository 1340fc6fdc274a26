import pytest

from lshape_lab.errors import AmbiguousTangency, GenerationStalled, Unsupported
from lshape_lab.gen import GenParams, normalize, random_grounded, random_scene, tower, tower_size
from lshape_lab.geom import lshape
from lshape_lab.graph import chi_exact, is_triangle_free, triangle_witness
from lshape_lab.keylemma.instance import invariant_report
from lshape_lab.scene import Scene


def test_params_validation():
    with pytest.raises(ValueError):
        GenParams(n=-1)
    with pytest.raises(ValueError):
        GenParams(density=0)
    assert GenParams(n=10).span == 40 and GenParams(n=2).span == 16


def test_empty_scene():
    assert len(random_scene(GenParams(n=0))) == 0


def test_random_scene_triangle_free():
    scene = random_scene(GenParams(seed=7, n=50))
    assert len(scene) == 50 and triangle_witness(scene.graph) is None


def test_random_scene_deterministic():
    p = GenParams(seed=11, n=40, density=0.4)
    assert random_scene(p) == random_scene(p)
    assert random_scene(p) != random_scene(GenParams(seed=12, n=40, density=0.4))


def test_random_scenes_have_edges():
    edges = sum(len(random_scene(GenParams(seed=s, n=30, density=0.4)).graph.edge_list()) for s in range(10))
    assert edges > 50


def test_grounded_single():
    inst = random_grounded(GenParams(seed=1, n=1), 1)
    assert len(inst.shapes) == 1 and not any(invariant_report(inst).values())


def test_grounded_large():
    inst = random_grounded(GenParams(seed=3, n=80), 10)
    assert len(inst.shapes) == 80 and len(inst.segments) == 10
    assert not any(invariant_report(inst).values())


def test_grounded_deterministic_and_valid():
    assert random_grounded(GenParams(seed=5, n=30), 4) == random_grounded(GenParams(seed=5, n=30), 4)
    for seed in range(40):
        inst = random_grounded(GenParams(seed=seed, n=5 + seed), 1 + seed % 6)
        assert not any(invariant_report(inst).values()), seed
    with pytest.raises(ValueError):
        random_grounded(GenParams(), 0)


def test_stall_reported():
    # 30 shapes on a 4-line grid cannot have distinct corners
    with pytest.raises(GenerationStalled):
        random_scene(GenParams(n=30, coordinate_span=4))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_tower_chi(k):
    scene = tower(k)
    assert len(scene) == tower_size(k)
    assert is_triangle_free(scene.graph)
    assert chi_exact(scene.graph)[0] == k


def test_tower4_triangle_free():
    scene = tower(4)
    assert len(scene) == tower_size(4) == 181 and is_triangle_free(scene.graph)


def test_tower_limits():
    with pytest.raises(Unsupported):
        tower(5)
    with pytest.raises(ValueError):
        tower(0)
    assert [tower_size(k) for k in (1, 2, 3, 4)] == [1, 3, 13, 181]


def test_tower_is_normalized():
    scene = tower(3)
    assert normalize(scene) == scene
    assert all(isinstance(c, int) for s in scene.shapes for c in (s.cx, s.cy, s.right_x, s.top_y))


def test_normalize_keeps_graph_and_is_idempotent():
    for seed in range(30):
        scene = random_scene(GenParams(seed=seed, n=25, density=0.5))
        once = normalize(scene)
        assert once.graph.edges() == scene.graph.edges()
        assert normalize(once) == once


def test_normalize_order_isomorphic():
    scene = Scene((lshape("a", 0, 2, 10, 8), lshape("b", 4, 4, 10, 30)))
    out = normalize(scene).shape_map()
    assert out["a"].right_x == out["b"].right_x
    assert out["a"].cx < out["b"].cx < out["a"].right_x


def test_normalize_rejects_corner_ties():
    with pytest.raises(AmbiguousTangency):
        normalize([lshape("a", 0, 2, 10, 8), lshape("b", 4, 2, 12, 9)])
