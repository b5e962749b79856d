import assert from "node:assert/strict";
import { spawnSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import path from "node:path";
import { test } from "node:test";
import { SCAN_HEADER, parseScanCsv } from "../src/csv";
import { dyadicMedians, envelopeConstant, logLogSlope } from "../src/fit";

const CLI = path.join(__dirname, "..", "src", "cli.js");
const dir = mkdtempSync(path.join(tmpdir(), "report-"));

function run(args: string[]) {
    const r = spawnSync(process.execPath, [CLI, ...args], { encoding: "utf8" });
    return { code: r.status, out: r.stdout, err: r.stderr };
}

function printed(out: string): Record<string, number> {
    const vals: Record<string, number> = {};
    for (const line of out.split("\n")) {
        const m = line.match(/^(\w+): (.+)$/);
        if (m) {
            vals[m[1]] = Number(m[2]);
        }
    }
    return vals;
}

function decayCsv(suite: string): string {
    const lines = [SCAN_HEADER];
    for (let i = 0; i < 120; i++) {
        const D = -(1200 + 157 * i);
        const val = 2.0 * Math.pow(-D, -0.8) * (1 + 0.2 * Math.sin(D));
        lines.push(`${suite},${D},0,0.5,2.0,${val},0.0,${val},4,1.0,50`);
    }
    return lines.join("\n") + "\n";
}

function twistedCsv(): string {
    const lines = [SCAN_HEADER];
    for (const N of [2, 3, 5, 11, 19, 29, 37, 43, 67, 89, 107]) {
        const val = 0.4 * Math.pow(N, -0.5) * Math.pow(Math.log(N), 3) * (1 + 0.1 * Math.cos(N));
        lines.push(`twisted,-71,${N},0.5,2.0,${val},0.0,${val},7,0.64,30`);
    }
    return lines.join("\n") + "\n";
}

function ldCsv(): string {
    const lines = [SCAN_HEADER];
    for (let i = 0; i < 300; i++) {
        const D = -(1000 + 331 * i);
        const ratio = 0.3 + 0.5 * Math.abs(Math.sin(3.7 * i));
        lines.push(`ld_audit,${D},0,0.0,0.0,${ratio * Math.log(-D)},${Math.log(-D)},${ratio},2,1.0,10`);
    }
    return lines.join("\n") + "\n";
}

const fixtures: Record<string, string> = {
    remainder_decay: decayCsv("remainder"),
    weyl_decay: decayCsv("weyl"),
    twisted_scaling: twistedCsv(),
    LD_histogram: ldCsv(),
};

for (const kind of Object.keys(fixtures)) {
    test(`renders ${kind} and reports its fit`, () => {
        const csv = path.join(dir, `${kind}.csv`);
        const svg = path.join(dir, `${kind}.svg`);
        writeFileSync(csv, fixtures[kind]);
        const r = run(["--input", csv, "--kind", kind, "--output", svg]);
        assert.equal(r.code, 0, r.err);
        const img = readFileSync(svg, "utf8");
        assert.ok(img.startsWith("<svg"));
        assert.ok(img.trimEnd().endsWith("</svg>"));
        assert.ok(img.length > 500);

        const rows = parseScanCsv(fixtures[kind]);
        const vals = printed(r.out);
        if (kind === "LD_histogram") {
            const want = Math.min(...rows.map((x) => x.residualOrRemainder));
            assert.equal(vals.min_ratio, want);
        } else if (kind === "twisted_scaling") {
            const pts = rows.map((x): [number, number] => [x.N, Math.abs(x.lhs)]);
            assert.equal(vals.slope, logLogSlope(pts));
            assert.equal(vals.envelope_c, envelopeConstant(pts));
        } else {
            assert.equal(vals.slope, logLogSlope(dyadicMedians(rows)));
        }
    });
}

test("empty CSV exits nonzero and writes nothing", () => {
    const csv = path.join(dir, "empty.csv");
    const svg = path.join(dir, "empty.svg");
    writeFileSync(csv, SCAN_HEADER + "\n");
    const r = run(["--input", csv, "--kind", "remainder_decay", "--output", svg]);
    assert.notEqual(r.code, 0);
    assert.ok(!existsSync(svg));
    assert.match(r.err, /no data rows/);
});

test("schema mismatch exits nonzero", () => {
    const csv = path.join(dir, "bad.csv");
    writeFileSync(csv, "not,the,header\n1,2,3\n");
    const r = run(["--input", csv, "--kind", "weyl_decay", "--output", path.join(dir, "bad.svg")]);
    assert.notEqual(r.code, 0);
    assert.match(r.err, /schema mismatch/);
});

test("unknown kind exits nonzero", () => {
    const r = run(["--input", "x.csv", "--kind", "pie", "--output", "y.svg"]);
    assert.notEqual(r.code, 0);
    assert.match(r.err, /unknown figure kind/);
});

test("missing arguments exit nonzero", () => {
    const r = run([]);
    assert.notEqual(r.code, 0);
    assert.match(r.err, /usage/);
});

test("missing input file exits nonzero", () => {
    const r = run(["--input", path.join(dir, "absent.csv"), "--kind", "LD_histogram",
        "--output", path.join(dir, "absent.svg")]);
    assert.notEqual(r.code, 0);
});
