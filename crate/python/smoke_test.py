"""Smoke test for the Python bindings: python python/smoke_test.py"""

import diagramforge as df


def main():
    svg, meta = df.generate(df.sample_seed(0, 3))
    assert svg.startswith("<svg"), svg[:40]
    assert meta["shapes"], "no shapes in metadata"

    card = df.evaluate(meta, svg)
    assert card["r"] == 1.0, card["r"]
    assert df.evaluate_standalone(svg, svg)["r"] == 1.0
    assert df.evaluate(meta, None)["coverage"]["missing"]

    stats = df.complexity(svg)
    assert stats["counts"]["basic"] > 0
    assert "keep" in df.filter(svg)
    assert df.clean(svg).startswith("<svg")

    assert abs(df.reward((0.8, 0.6, 1.0, 0.4)) - 0.7) < 1e-12
    assert df.reward(None) == 0.0
    assert df.extract_svg_block("x <svg></svg> y") == "<svg></svg>"

    try:
        df.generate(1, {"no_such_key": 1})
    except ValueError:
        pass
    else:
        raise AssertionError("bad override accepted")
    print("smoke test ok")


if __name__ == "__main__":
    main()
