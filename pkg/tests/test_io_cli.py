"""Surface file round-trips and the command-line interface."""

import json

import pytest

from flatsurfkit import surface_io
from flatsurfkit.cli import run
from flatsurfkit.surface import Polygon, Surface, SurfaceError


class TestSurfaceFiles:
    def test_exact_roundtrip_is_bit_exact(self, ay):
        text = surface_io.dumps(ay)
        back = surface_io.loads(text)
        assert back == ay
        assert back.is_exact()
        assert surface_io.dumps(back) == text

    def test_float_roundtrip(self, ay):
        floated = Surface(
            [Polygon([(float(x), float(y)) for x, y in p.vertices]) for p in ay.polygons],
            ay.gluings,
            ay.kind,
        )
        back = surface_io.loads(surface_io.dumps(floated))
        assert back == floated

    def test_rejects_unknown_format(self):
        with pytest.raises(SurfaceError):
            surface_io.loads('{"format": "nope", "kind": "translation", "polygons": [], "gluings": []}')


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCli:
    def test_build_info_pipeline(self, tmp_path, capsys):
        path = tmp_path / "ay.json"
        code, _, _ = invoke(capsys, "build", "ay", "-o", str(path))
        assert code == 0
        code, out, _ = invoke(capsys, "info", str(path))
        assert code == 0
        assert "genus 3" in out
        assert "6pi 6pi" in out

    def test_delaunay_census(self, tmp_path, capsys):
        path = tmp_path / "ay.json"
        invoke(capsys, "build", "ay", "-o", str(path))
        code, out, _ = invoke(capsys, "delaunay", str(path))
        assert code == 0
        assert "2 squares" in out and "4 trapezoids" in out

    def test_delaunay_svg_net(self, tmp_path, capsys):
        path = tmp_path / "ay.json"
        svg = tmp_path / "net.svg"
        invoke(capsys, "build", "ay", "-o", str(path))
        code, _, _ = invoke(capsys, "delaunay", str(path), "--svg", str(svg))
        assert code == 0
        text = svg.read_text()
        assert text.startswith("<svg") and "<polygon" in text and "<text" in text

    def test_isometries_output(self, tmp_path, capsys):
        path = tmp_path / "ay.json"
        invoke(capsys, "build", "ay", "-o", str(path))
        code, out, _ = invoke(capsys, "isometries", str(path))
        assert code == 0
        assert "group order 8" in out
        assert "dihedral: yes" in out

    def test_apply_and_genus2(self, tmp_path, capsys):
        src = tmp_path / "ay.json"
        dst = tmp_path / "twice.json"
        invoke(capsys, "build", "ay", "-o", str(src))
        code, _, _ = invoke(capsys, "apply", "-m", "2", "0", "0", "1", str(src), "-o", str(dst))
        assert code == 0
        assert surface_io.loads(dst.read_text()).is_exact()
        g2 = tmp_path / "xi.json"
        code, _, _ = invoke(capsys, "genus2", str(src), "--square", "0", "-o", str(g2))
        assert code == 0
        code, out, _ = invoke(capsys, "info", str(g2))
        assert "genus 2" in out and "3pi 3pi 3pi 3pi" in out

    def test_build_trapezoid_and_origami(self, tmp_path, capsys):
        path = tmp_path / "rect.json"
        code, _, _ = invoke(capsys, "build", "trapezoid", "--b", "1", "--B", "1", "--h", "0.5", "-o", str(path))
        assert code == 0
        code, out, _ = invoke(capsys, "origami-check", str(path))
        assert code == 0 and "degree 10" in out

    def test_escalator_origami(self, tmp_path, capsys):
        path = tmp_path / "esc.json"
        invoke(capsys, "build", "escalator", "-o", str(path))
        code, out, _ = invoke(capsys, "origami-check", str(path))
        assert code == 0 and "degree 6" in out

    def test_periods_ratios(self, capsys):
        code, out, _ = invoke(capsys, "periods", "ratios", "--t", "2.0", "--u", "1.0")
        assert code == 0
        assert "r2 = J3/J1 = 1.00000000000" in out

    def test_periods_silhol(self, capsys):
        code, out, _ = invoke(capsys, "periods", "silhol", "--a-imag", "0.5")
        assert code == 0
        assert "ratio" in out

    def test_solve_rect(self, capsys):
        code, out, _ = invoke(capsys, "solve-rect", "--mu", "0.5")
        assert code == 0
        assert "t = 3.0000000" in out

    def test_tessellate_json_and_svg(self, tmp_path, capsys):
        surf = tmp_path / "torus.json"
        out_json = tmp_path / "tess.json"
        out_svg = tmp_path / "tess.svg"
        square = Polygon([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
        from flatsurfkit.surface import Gluing, TRANSLATION

        torus = Surface(
            [square], [Gluing((0, 0), (0, 2), TRANSLATION), Gluing((0, 1), (0, 3), TRANSLATION)]
        )
        surf.write_text(surface_io.dumps(torus))
        code, out, _ = invoke(
            capsys, "tessellate", str(surf), "--radius", "0.8", "--x", "0.05", "--y", "1.2",
            "--json", str(out_json), "--svg", str(out_svg),
        )
        assert code == 0
        data = json.loads(out_json.read_text())
        assert data["cells"] and all("walls" in c for c in data["cells"])
        assert out_svg.read_text().startswith("<svg")

    def test_usage_error_exit_code(self, capsys):
        assert run(["no-such-command"]) == 2
        assert run([]) == 2

    def test_domain_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"format": "flatsurface/1", "kind": "translation", "scalars": "exact", '
                       '"polygons": [[["0","0"],["1","0"],["1","1"],["0","1"]]], "gluings": []}')
        assert run(["info", str(bad)]) == 1

    def test_stdout_determinism(self, tmp_path, capsys):
        p1 = tmp_path / "a.json"
        p2 = tmp_path / "b.json"
        invoke(capsys, "build", "ay", "-o", str(p1))
        invoke(capsys, "build", "ay", "-o", str(p2))
        assert p1.read_text() == p2.read_text()
        _, out1, _ = invoke(capsys, "delaunay", str(p1))
        _, out2, _ = invoke(capsys, "delaunay", str(p2))
        assert out1 == out2
