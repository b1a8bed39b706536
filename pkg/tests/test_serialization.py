from fractions import Fraction

import pytest

from src.config import Settings, configure_logging, get_settings
from src.models.errors import BadIndices, EmptyInput, NonPositive, UnsupportedFormat
from src.models.types import Root
from src.tools.serialization import (
    format_rational,
    parse_blocks,
    parse_rational,
    point_from_json,
    point_to_json,
)


class TestRationals:
    def test_format_always_has_denominator(self):
        assert format_rational(3) == "3/1"
        assert format_rational(Fraction(-6, 4)) == "-3/2"

    @pytest.mark.parametrize("text, value", [
        ("7", Fraction(7)), ("-3/2", Fraction(-3, 2)), (" 4 / 6 ", Fraction(2, 3)), (5, Fraction(5)),
    ])
    def test_parse(self, text, value):
        assert parse_rational(text) == value

    @pytest.mark.parametrize("text", ["1/0", "1.5", "", "a/b", True])
    def test_parse_rejects(self, text):
        with pytest.raises(UnsupportedFormat):
            parse_rational(text)


class TestBlocks:
    def test_parse(self):
        assert parse_blocks("2,1,3,2") == (2, 1, 3, 2)
        assert parse_blocks(" 5 ") == (5,)

    def test_empty(self):
        with pytest.raises(EmptyInput):
            parse_blocks("")

    def test_non_positive(self):
        with pytest.raises(NonPositive):
            parse_blocks("2,0")

    def test_not_an_integer(self):
        with pytest.raises(UnsupportedFormat):
            parse_blocks("2,1.5")


class TestPoints:
    def test_unlisted_coordinates_are_zero(self, palindrome):
        point = point_from_json({"n": 6, "entries": [{"row": 4, "col": 6, "value": "1/2"}]}, palindrome)
        assert point[(4, 6)] == Fraction(1, 2)
        assert point[(1, 2)] == 0
        assert set(point.values) == palindrome.roots.M

    def test_sparse_output(self, palindrome, worked_y):
        doc = point_to_json(worked_y.point)
        assert doc["n"] == 6
        assert doc["entries"][0] == {"row": 1, "col": 2, "value": "2/1"}
        assert len(doc["entries"]) == 6
        assert point_from_json(doc, palindrome) == worked_y.point

    def test_size_mismatch(self, palindrome):
        with pytest.raises(BadIndices):
            point_from_json({"n": 5, "entries": []}, palindrome)

    def test_coordinate_outside_nilradical(self, palindrome):
        with pytest.raises(BadIndices) as excinfo:
            point_from_json({"n": 6, "entries": [{"row": 2, "col": 3, "value": "1"}]}, palindrome)
        assert excinfo.value.root == (2, 3)


class TestSettings:
    def test_defaults(self):
        settings = Settings()
        assert settings.det_size_cap == 8
        assert settings.log_level == "WARNING"

    def test_log_level_is_normalized(self):
        assert Settings(log_level="debug").log_level == "DEBUG"

    def test_unknown_log_level(self):
        with pytest.raises(ValueError):
            Settings(log_level="chatty")

    def test_configure_logging_defaults_to_settings(self):
        configure_logging()
        configure_logging(None)
        configure_logging("DEBUG")

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("PINV_DET_SIZE_CAP", "5")
        monkeypatch.setenv("PINV_SEED", "12")
        get_settings.cache_clear()
        try:
            settings = get_settings()
            assert settings.det_size_cap == 5
            assert settings.seed == 12
        finally:
            monkeypatch.undo()
            get_settings.cache_clear()
