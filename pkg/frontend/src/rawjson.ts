/**
 * JSON parser that keeps every number as its original source text.
 *
 * The dashboard never recomputes or reformats a metric: each displayed value
 * must string-compare equal to what the service serialized. JSON.parse would
 * reformat (`1e-05` becomes `0.00001` when stringified back), so numbers are
 * wrapped in RawNumber holding the exact literal.
 */

export class RawNumber {
  constructor(readonly raw: string) {}
  get value(): number {
    return Number(this.raw);
  }
}

export type RawValue =
  | string
  | boolean
  | null
  | RawNumber
  | RawValue[]
  | { [key: string]: RawValue };

class Parser {
  private pos = 0;

  constructor(private readonly text: string) {}

  parse(): RawValue {
    const value = this.parseValue();
    this.skipWhitespace();
    if (this.pos !== this.text.length) {
      throw new SyntaxError(`trailing characters at position ${this.pos}`);
    }
    return value;
  }

  private skipWhitespace(): void {
    while (this.pos < this.text.length && " \t\n\r".includes(this.text[this.pos])) {
      this.pos += 1;
    }
  }

  private parseValue(): RawValue {
    this.skipWhitespace();
    const ch = this.text[this.pos];
    if (ch === undefined) throw new SyntaxError("unexpected end of input");
    if (ch === "{") return this.parseObject();
    if (ch === "[") return this.parseArray();
    if (ch === '"') return this.parseString();
    if (ch === "t" || ch === "f") return this.parseKeyword();
    if (ch === "n") return this.parseNull();
    return this.parseNumber();
  }

  private expect(ch: string): void {
    if (this.text[this.pos] !== ch) {
      throw new SyntaxError(`expected '${ch}' at position ${this.pos}`);
    }
    this.pos += 1;
  }

  private parseObject(): { [key: string]: RawValue } {
    this.expect("{");
    const out: { [key: string]: RawValue } = {};
    this.skipWhitespace();
    if (this.text[this.pos] === "}") {
      this.pos += 1;
      return out;
    }
    for (;;) {
      this.skipWhitespace();
      const key = this.parseString();
      this.skipWhitespace();
      this.expect(":");
      out[key] = this.parseValue();
      this.skipWhitespace();
      if (this.text[this.pos] === ",") {
        this.pos += 1;
        continue;
      }
      this.expect("}");
      return out;
    }
  }

  private parseArray(): RawValue[] {
    this.expect("[");
    const out: RawValue[] = [];
    this.skipWhitespace();
    if (this.text[this.pos] === "]") {
      this.pos += 1;
      return out;
    }
    for (;;) {
      out.push(this.parseValue());
      this.skipWhitespace();
      if (this.text[this.pos] === ",") {
        this.pos += 1;
        continue;
      }
      this.expect("]");
      return out;
    }
  }

  private parseString(): string {
    this.expect('"');
    let out = "";
    for (;;) {
      const ch = this.text[this.pos];
      if (ch === undefined) throw new SyntaxError("unterminated string");
      this.pos += 1;
      if (ch === '"') return out;
      if (ch !== "\\") {
        out += ch;
        continue;
      }
      const esc = this.text[this.pos];
      this.pos += 1;
      switch (esc) {
        case '"': out += '"'; break;
        case "\\": out += "\\"; break;
        case "/": out += "/"; break;
        case "b": out += "\b"; break;
        case "f": out += "\f"; break;
        case "n": out += "\n"; break;
        case "r": out += "\r"; break;
        case "t": out += "\t"; break;
        case "u": {
          const hex = this.text.slice(this.pos, this.pos + 4);
          if (!/^[0-9a-fA-F]{4}$/.test(hex)) {
            throw new SyntaxError(`bad unicode escape at position ${this.pos}`);
          }
          out += String.fromCharCode(parseInt(hex, 16));
          this.pos += 4;
          break;
        }
        default:
          throw new SyntaxError(`bad escape '\\${esc}' at position ${this.pos}`);
      }
    }
  }

  private parseKeyword(): boolean {
    if (this.text.startsWith("true", this.pos)) {
      this.pos += 4;
      return true;
    }
    if (this.text.startsWith("false", this.pos)) {
      this.pos += 5;
      return false;
    }
    throw new SyntaxError(`unexpected token at position ${this.pos}`);
  }

  private parseNull(): null {
    if (this.text.startsWith("null", this.pos)) {
      this.pos += 4;
      return null;
    }
    throw new SyntaxError(`unexpected token at position ${this.pos}`);
  }

  private parseNumber(): RawNumber {
    const match = /^-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][+-]?\d+)?/.exec(
      this.text.slice(this.pos),
    );
    if (!match) {
      throw new SyntaxError(`invalid number at position ${this.pos}`);
    }
    this.pos += match[0].length;
    return new RawNumber(match[0]);
  }
}

export function parseRaw(text: string): RawValue {
  return new Parser(text).parse();
}

export function asObject(v: RawValue): { [key: string]: RawValue } {
  if (v === null || typeof v !== "object" || Array.isArray(v) || v instanceof RawNumber) {
    throw new TypeError("expected a JSON object");
  }
  return v;
}

export function asArray(v: RawValue): RawValue[] {
  if (!Array.isArray(v)) throw new TypeError("expected a JSON array");
  return v;
}

export function asNumber(v: RawValue): RawNumber {
  if (!(v instanceof RawNumber)) throw new TypeError("expected a JSON number");
  return v;
}

export function asString(v: RawValue): string {
  if (typeof v !== "string") throw new TypeError("expected a JSON string");
  return v;
}
