import { describe, expect, it } from "vitest";

import { canonicalDumps, compareIds, formatNumber } from "../src/canonical.js";

// Reference strings produced by the engine's formatter ("%.9g", with -0
// normalized to 0) for the same doubles.
const ENGINE_REFERENCE: [number, string][] = [
  [0.0, "0"],
  [-0.0, "0"],
  [0.45, "0.45"],
  [2.5, "2.5"],
  [0.3, "0.3"],
  [-8.30823964, "-8.30823964"],
  [0.501337585, "0.501337585"],
  [1 / 3, "0.333333333"],
  [1e-5, "1e-05"],
  [1.23456789e-7, "1.23456789e-07"],
  [123456789.0, "123456789"],
  [1234567890.0, "1.23456789e+09"],
  [9.87654321e12, "9.87654321e+12"],
  [0.0001, "0.0001"],
  [0.00012345, "0.00012345"],
  [-0.175, "-0.175"],
  [5.0, "5"],
  [42, "42"],
  [1e9, "1e+09"],
  [999999999.0, "999999999"],
  [123.456789123, "123.456789"],
  [0.10000000000000002, "0.1"],
  [3.141592653589793, "3.14159265"],
];

describe("canonical number formatting", () => {
  it("matches the engine formatter on the reference values", () => {
    for (const [value, expected] of ENGINE_REFERENCE) {
      expect(formatNumber(value), String(value)).toBe(expected);
    }
  });

  it("rejects non-finite numbers", () => {
    expect(() => formatNumber(Number.NaN)).toThrow();
    expect(() => formatNumber(Infinity)).toThrow();
  });
});

describe("canonical dumps", () => {
  it("sorts keys and uses compact separators", () => {
    expect(canonicalDumps({ b: 1, a: [true, null, "x"] })).toBe('{"a":[true,null,"x"],"b":1}');
  });

  it("escapes non-ascii like the engine", () => {
    expect(canonicalDumps("café")).toBe('"caf\\u00e9"');
  });
});

describe("id ordering", () => {
  it("sorts numeric suffixes numerically", () => {
    const ids = ["c10", "c2", "c1", "s0", "c0"];
    ids.sort(compareIds);
    expect(ids).toEqual(["c0", "c1", "c2", "c10", "s0"]);
  });
});
