"""Smoke test for the pyfpconv extension.

Build and run from the repository root:

    cargo build --release -p fpconv-py --features extension-module
    cp target/release/libpyfpconv.so python/pyfpconv.so
    python3 python/smoke_test.py
"""

import math
import random
import struct

import pyfpconv as fp


def f32(x):
    return struct.unpack("<f", struct.pack("<f", x))[0]


def main():
    pi32 = f32(math.pi)
    d = fp.convert(pi32, "f32", "dragon4")
    assert (d.w, d.q, d.digits) == (31415927, -7, 8), d
    assert fp.render(pi32, "f32", "dragon4", "minimal") == "3.1415927"

    assert fp.render(0.0) == "0"
    assert fp.render(-0.0, policy="sci") == "-0"
    assert fp.render(0.00011, policy="c") == "0.00011"
    assert fp.render(0.00011) == "1.1e-4"
    assert fp.render(float("inf")) == "inf"
    assert fp.to_shortest_string(12e9) == "12e9"
    assert fp.to_shortest_string(5e-324) == "5e-324"

    bits = fp.parse_exact("2150000000", "f32")
    assert bits == struct.unpack("<I", struct.pack("<f", 2150000128.0))[0]
    assert fp.to_shortest_string(2150000128.0, "f32") == "2.15e9"

    dec = fp.decode(1.0)
    assert (dec.m, dec.p, dec.class_) == (1 << 52, -52, "normal"), dec
    assert fp.decode(5e-324).class_ == "subnormal"

    rng = random.Random(7)
    for _ in range(2000):
        x = struct.unpack("<d", struct.pack("<Q", rng.getrandbits(64)))[0]
        if not math.isfinite(x):
            continue
        for algo in ("dragon4", "dragon4-fast", "fastpath"):
            for policy in ("c", "minimal", "sci"):
                assert float(fp.render(x, "f64", algo, policy)) == x, (x, algo, policy)
        assert len(fp.to_shortest_string(x)) <= len(repr(x).replace("e+", "e"))
        assert fp.minimal_digit_count(x) == fp.convert(x).digits

    try:
        fp.parse_exact("1.2.3")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed literal accepted")

    values = fp.generate_unit(1000, seed=1)
    assert len(values) == 1000 and all(0.0 <= v < 1.0 for v in values)
    stats = fp.unit_stats(1000, seed=1)
    assert stats["count"] == 1000 and stats["integer_count"] == 0

    report = fp.verify("binary64 random 500", seed=3)
    assert report["passed"], report
    row = fp.bench("unit:200", algo="fastpath", repeats=3)
    assert row["count"] == 200 and row["ns_per_float"] > 0

    print("pyfpconv smoke test: ok")


if __name__ == "__main__":
    main()
