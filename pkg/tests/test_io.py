import json

import pytest

from hyperbethe import fixtures
from hyperbethe.io import (InputError, arrangement_from_dict, arrangement_to_dict, data_path, gaudin_from_dict,
                           load_arrangement, load_gaudin)


def test_bundled_files_load():
    fam, z = load_arrangement(data_path("triangle.json"))
    assert (fam.n, fam.k) == (3, 2) and z is not None
    for name in ("pair.json", "fourlines.json", "fourgeneric.json"):
        load_arrangement(data_path(name))
    for name in ("sl2_two_spins.json", "sl2_three_spins.json", "sl2_verma_pair.json", "gl2_two_points.json"):
        load_gaudin(data_path(name))


def test_roundtrip():
    fam, z = fixtures.four_generic_lines()
    obj = json.loads(json.dumps(arrangement_to_dict(fam, z)))
    fam2, z2 = arrangement_from_dict(obj)
    assert fam2 == fam and z2 == z


def test_rational_strings_accepted():
    fam, z = arrangement_from_dict({"B": [["1"], ["1"]], "a": ["2/3", 1], "z": ["1/2", -1]})
    assert str(fam.weights[0]) == "2/3" and str(z[0]) == "1/2"


@pytest.mark.parametrize("obj, fragment", [
    ({"a": [1, 1]}, "missing key 'B'"),
    ({"B": [[1], [1]], "a": [1, "x"]}, "a[1]"),
    ({"B": [[1, 0], [0, 1]], "a": [1, 1]}, "n > k"),
    ({"B": [[1], [1]], "a": [1, 1], "z": [0]}, "'z' must have 2"),
    ({"B": [[1], [1, 2]], "a": [1, 1]}, "n x k"),
])
def test_arrangement_errors(obj, fragment):
    with pytest.raises(InputError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        arrangement_from_dict(obj, "f.json")


def test_parse_error_has_line_and_column(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"B": [[1],\n  ]}')
    with pytest.raises(InputError, match=r"bad.json:2:\d+:"):
        load_arrangement(p)


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_arrangement(tmp_path / "none.json")


def test_gaudin_errors():
    with pytest.raises(InputError, match="algebra"):
        gaudin_from_dict({"algebra": "sl3", "weights": [1], "k": 1, "x": [0]})
    with pytest.raises(InputError, match="missing key 'x'"):
        gaudin_from_dict({"algebra": "sl2", "weights": [1], "k": 1})
    with pytest.raises(InputError):
        gaudin_from_dict({"algebra": "sl2", "weights": [1, 1], "k": 1, "x": [0, 0]})
