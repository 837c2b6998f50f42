"""Smoke test for the blockrig extension module. Run after `pip install -e crates/python`."""

from fractions import Fraction

import blockrig

SWAP = [0b00, 0b10, 0b01, 0b11]
IDENTITY = [0, 1, 2, 3]


def main():
    assert blockrig.rank(["110", "011", "101"]) == 2

    res = blockrig.matrix_rigidity(["100", "010", "001"], 1, 1)
    assert not res["rigid"] and len(res["b"]) == 3

    value, tables = blockrig.game_value(2, [[1], [0]], 1, [[0, 1, 0, 1], [0, 0, 1, 1]])
    assert value == Fraction(1, 2), value
    assert len(tables) == 2

    lo, hi = blockrig.repetition_bounds(2, [[1], [0]], 1, [[0, 1, 0, 1], [0, 0, 1, 1]], 2)
    assert lo <= hi

    assert blockrig.transpose_value(2, [[0], [1]]) == Fraction(1, 2)

    fr = blockrig.function_rigidity(2, IDENTITY, "1", 1)
    assert not fr["rigid"] and fr["value"] == 1

    assert blockrig.tensor_lift(2, SWAP, 2, "1001") == "0110"
    out, steps, predicted = blockrig.run_tensor_machine(2, SWAP, 2, "1001")
    assert out == "0110" and steps == predicted

    assert [blockrig.log_star(n) for n in (1, 2, 4, 16, 17)] == [0, 1, 2, 3, 4]

    try:
        blockrig.rank(["10", "1"])
    except ValueError:
        pass
    else:
        raise AssertionError("ragged rows accepted")

    print("smoke test ok, blockrig", blockrig.__version__)


if __name__ == "__main__":
    main()
