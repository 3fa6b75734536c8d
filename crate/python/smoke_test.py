"""Smoke test for the flatgeo Python bindings."""

import json
import math

import flatgeo


def main() -> None:
    names = flatgeo.catalog_names()
    assert len(names) == 10, names

    torus = flatgeo.flat_torus((1.0, 0.0), (0.0, 1.0))
    assert torus.euler_characteristic == 0 and torus.orientable
    assert torus.is_parallel()
    tr = torus.trace(0, 0.6, 0.2, math.atan2(1, 2), math.sqrt(5))
    assert tr.termination == "LengthReached"
    assert abs(torus.closed_period(tr) - math.sqrt(5)) < 1e-6
    assert torus.self_intersections(tr) == []

    cube = flatgeo.cube()
    verdict = cube.classify()
    assert not verdict["parallel"]
    assert abs(verdict["witness_angle"] % math.pi - math.pi / 2) < 1e-9
    assert all(abs(w - math.pi / 2) < 1e-12 for w in cube.curvatures)

    again = flatgeo.Surface.from_json(cube.to_json())
    assert again.to_json() == cube.to_json()

    tet = flatgeo.isosceles_tetrahedron(1.0, 1.0, 1.0)
    assert tet.gauss_bonnet_residual() < 1e-9
    cs = tet.corners(0)
    cx, cy = sum(c[0] for c in cs) / 3, sum(c[1] for c in cs) / 3
    long = tet.trace(0, cx, cy, 0.7, 200.0)
    assert 0.0 <= tet.density(long, 0.05, 500, 1) <= 1.0
    assert tet.reverse_check(0, cx, cy, 0.7, 100.0) < 1e-6
    csv = tet.scan(32, 20.0, seed=3, samples=100)
    assert csv == tet.scan(32, 20.0, seed=3, samples=100)
    assert "SelfIntersecting" not in csv
    assert json.loads(long.to_json())["termination"] == "LengthReached"
    assert tet.svg(long).startswith("<svg")

    square = flatgeo.double_of_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert square.is_parallel()

    try:
        flatgeo.isosceles_tetrahedron(1.0, 1.0, 2.1)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("flatgeo smoke test ok")


if __name__ == "__main__":
    main()
