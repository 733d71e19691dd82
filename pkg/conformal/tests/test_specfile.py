import os

import sympy as sp
from django.test import SimpleTestCase

from conformal.specfile import load_spec, parse_spec, resolve_path
from conformal.tests.factories import ADS3_SPEC, FLAT4_SPEC
from conformal.utils import SpecFileError


class TestParse(SimpleTestCase):

    def test_header(self):
        spec = parse_spec(FLAT4_SPEC)
        self.assertEqual(spec.dimension, 4)
        self.assertEqual(spec.coordinates, ("t", "x", "y", "z"))
        self.assertEqual(spec.signature, (-1, 1, 1, 1))
        self.assertEqual(len(spec.metric), 4)
        self.assertIsNone(spec.scale)

    def test_sections(self):
        spec = parse_spec(ADS3_SPEC)
        self.assertEqual(len(spec.vielbein), 3)
        self.assertEqual([e.name for e in spec.killing], ["xi", "xi", "xi"])
        self.assertEqual(spec.metric[0].indices, ("t", "t"))
        self.assertEqual(spec.metric[0].line, 7)

    def test_default_signature(self):
        spec = parse_spec("dimension = 2\ncoordinates = x y\n[metric]\ng[0,0] = 1\ng[1,1] = 1\n")
        self.assertEqual(spec.signature, (1, 1))

    def test_errors_carry_line_numbers(self):
        cases = [
            ("dimension = 2\ncoordinates = x, y\n[tensors]\n", 3),
            ("dimension = 2\ncoordinates = x, y\ncolour = red\n", 3),
            ("dimension = 2\ndimension = 3\n", 2),
            ("dimension = two\ncoordinates = x, y\n[metric]\ng[0,0] = 1\n", 1),
            ("dimension = 3\ncoordinates = x, y\n[metric]\ng[0,0] = 1\n", 2),
            ("dimension = 2\ncoordinates = x, y\nsignature = -+-\n[metric]\ng[0,0] = 1\n", 3),
            ("dimension = 2\ncoordinates = x, y\n[metric]\nh[0,0] = 1\n", 4),
            ("dimension = 2\ncoordinates = x, y\n[metric]\ng[0,0] = 1\n[scale]\nsigma = 1\nsigma = 2\n", 7),
            ("dimension = 2\ncoordinates = x, y\n[metric]\nthis is not an entry\n", 4),
        ]
        for text, line in cases:
            with self.subTest(text=text):
                with self.assertRaises(SpecFileError) as ctx:
                    parse_spec(text)
                self.assertEqual(ctx.exception.line, line)
                self.assertTrue(str(ctx.exception).startswith(f"line {line}: "))

    def test_missing_header(self):
        with self.assertRaises(SpecFileError) as ctx:
            parse_spec("[metric]\ng[0,0] = 1\n")
        self.assertIsNone(ctx.exception.line)

    def test_empty_metric(self):
        with self.assertRaises(SpecFileError):
            parse_spec("dimension = 2\ncoordinates = x, y\n")


class TestBuild(SimpleTestCase):

    def test_ads3(self):
        bundle = parse_spec(ADS3_SPEC).build()
        z = bundle.ctx.coord_symbols[2]
        self.assertEqual(bundle.geo.metric[2, 2], 1 / z**2)
        self.assertEqual(bundle.geo.metric[0, 1], 0)
        self.assertEqual(bundle.geo.scalar_curvature, -6)
        self.assertEqual(bundle.sigma, 1)
        self.assertIsNone(bundle.weyl)
        self.assertEqual(bundle.killing, list(bundle.ctx.coord_symbols))

    def test_symmetric_partner_must_agree(self):
        text = "dimension = 2\ncoordinates = x, y\n[metric]\ng[x,x] = 1\ng[y,y] = 1\ng[x,y] = x\ng[y,x] = y\n"
        with self.assertRaises(SpecFileError) as ctx:
            parse_spec(text).build()
        self.assertEqual(ctx.exception.line, 7)

    def test_symmetric_partner_may_repeat(self):
        text = ("dimension = 2\ncoordinates = x, y\n[metric]\n"
                "g[x,x] = 2\ng[y,y] = 2\ng[x,y] = 1\ng[y,x] = 1\n")
        bundle = parse_spec(text).build()
        self.assertEqual(bundle.geo.metric, sp.Matrix([[2, 1], [1, 2]]))

    def test_unknown_index(self):
        text = "dimension = 2\ncoordinates = x, y\n[metric]\ng[x,w] = 1\n"
        with self.assertRaises(SpecFileError) as ctx:
            parse_spec(text).build()
        self.assertEqual(ctx.exception.line, 4)

    def test_index_out_of_range(self):
        text = "dimension = 2\ncoordinates = x, y\n[metric]\ng[0,0] = 1\ng[1,2] = 1\n"
        with self.assertRaises(SpecFileError) as ctx:
            parse_spec(text).build()
        self.assertEqual(ctx.exception.line, 5)

    def test_bad_expression(self):
        text = "dimension = 2\ncoordinates = x, y\n[metric]\ng[0,0] = 1 +\ng[1,1] = 1\n"
        with self.assertRaises(SpecFileError) as ctx:
            parse_spec(text).build()
        self.assertEqual(ctx.exception.line, 4)

    def test_symbolic_param(self):
        text = ("dimension = 2\ncoordinates = x, y\n[params]\nL = symbolic\n"
                "[metric]\ng[0,0] = L^2\ng[1,1] = L^2\n")
        bundle = parse_spec(text).build()
        self.assertEqual({s.name for s in bundle.geo.metric[0, 0].free_symbols}, {"L"})


class TestFiles(SimpleTestCase):

    def test_bundled_specs_load(self):
        for name in ["flat3.spec", "flat4.spec", "ads4.spec", "random4.spec", "sphere-slice.spec"]:
            with self.subTest(name=name):
                self.assertTrue(os.path.exists(resolve_path(name)))
                self.assertGreaterEqual(load_spec(name).dimension, 3)

    def test_missing_file(self):
        with self.assertRaises(SpecFileError):
            resolve_path("no-such-background.spec")
