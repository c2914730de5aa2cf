// Canonical JSON serialization matching the engine byte for byte: object
// keys sorted, numbers at 9 significant digits with printf-%g trimming,
// non-ASCII escaped. Scene text serialized here must compare equal to the
// engine's own output for the same document.

function formatExponent(exp: number): string {
  const sign = exp < 0 ? "-" : "+";
  const digits = Math.abs(exp).toString();
  return `e${sign}${digits.length < 2 ? "0" + digits : digits}`;
}

export function formatNumber(x: number): string {
  if (!Number.isFinite(x)) {
    throw new Error("non-finite number in scene");
  }
  if (x === 0) return "0"; // covers -0
  if (Number.isInteger(x) && Math.abs(x) < 1e15) {
    // %g uses scientific form once the exponent reaches the precision.
    if (Math.abs(x) < 1e9) return String(x);
  }
  // 9 significant digits via exponential form, then choose the notation
  // the engine's %g would choose.
  const exponential = x.toExponential(8); // d.dddddddde±x
  const [mantissaRaw, expRaw] = exponential.split("e");
  const exp = parseInt(expRaw, 10);
  let mantissa = mantissaRaw;
  if (exp >= -4 && exp < 9) {
    // Fixed notation: shift the mantissa digits by the exponent.
    const negative = mantissa.startsWith("-");
    const digits = mantissa.replace("-", "").replace(".", ""); // 9 digits
    let out: string;
    if (exp >= 0) {
      const head = digits.slice(0, exp + 1);
      const tail = digits.slice(exp + 1).replace(/0+$/, "");
      out = tail ? `${head}.${tail}` : head;
    } else {
      const tail = (`${"0".repeat(-exp - 1)}${digits}`).replace(/0+$/, "");
      out = tail ? `0.${tail}` : "0";
    }
    return negative && out !== "0" ? `-${out}` : out;
  }
  mantissa = mantissa.replace(/0+$/, "").replace(/\.$/, "");
  return `${mantissa}${formatExponent(exp)}`;
}

function escapeString(s: string): string {
  let out = JSON.stringify(s);
  // json.dumps(ensure_ascii=True) escapes anything above 0x7f.
  out = out.replace(/[-￿]/g, (ch) => {
    return "\\u" + ch.charCodeAt(0).toString(16).padStart(4, "0");
  });
  return out;
}

export function canonicalDumps(value: unknown): string {
  const out: string[] = [];
  dump(value, out);
  return out.join("");
}

function dump(value: unknown, out: string[]): void {
  if (value === null || value === undefined) {
    out.push("null");
  } else if (value === true) {
    out.push("true");
  } else if (value === false) {
    out.push("false");
  } else if (typeof value === "number") {
    out.push(formatNumber(value));
  } else if (typeof value === "string") {
    out.push(escapeString(value));
  } else if (Array.isArray(value)) {
    out.push("[");
    value.forEach((item, i) => {
      if (i) out.push(",");
      dump(item, out);
    });
    out.push("]");
  } else if (typeof value === "object") {
    const record = value as Record<string, unknown>;
    out.push("{");
    Object.keys(record)
      .sort()
      .forEach((key, i) => {
        if (i) out.push(",");
        out.push(escapeString(key));
        out.push(":");
        dump(record[key], out);
      });
    out.push("}");
  } else {
    throw new Error(`cannot serialize ${typeof value}`);
  }
}

// The engine's id ordering: "c10" sorts after "c2".
export function idSortKey(id: string): [number, string, number] {
  const match = /^([a-z]+)(\d+)$/.exec(id);
  if (match) return [0, match[1], parseInt(match[2], 10)];
  return [1, id, 0];
}

export function compareIds(a: string, b: string): number {
  const ka = idSortKey(a);
  const kb = idSortKey(b);
  if (ka[0] !== kb[0]) return ka[0] - kb[0];
  if (ka[1] !== kb[1]) return ka[1] < kb[1] ? -1 : 1;
  return ka[2] - kb[2];
}
