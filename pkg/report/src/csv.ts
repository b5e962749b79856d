import { readFileSync } from "fs";

// Row of the scan CSV written by the cgmoments CLI; the header below is
// the contract and must match byte for byte.
export const SCAN_HEADER =
    "suite,D,N,s_re,s_im,lhs,rhs_or_main,residual_or_remainder,h,LD,runtime_ms";

export interface ScanRow {
    suite: string;
    D: number;
    N: number;
    sRe: number;
    sIm: number;
    lhs: number;
    rhsOrMain: number;
    residualOrRemainder: number;
    h: number;
    LD: number;
    runtimeMs: number;
}

export function parseScanCsv(text: string): ScanRow[] {
    const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
    if (lines.length === 0 || lines[0] !== SCAN_HEADER) {
        throw new Error(`schema mismatch: expected header "${SCAN_HEADER}"`);
    }
    const rows: ScanRow[] = [];
    for (let i = 1; i < lines.length; i++) {
        const parts = lines[i].split(",");
        if (parts.length !== 11) {
            throw new Error(`schema mismatch: row ${i} has ${parts.length} fields`);
        }
        rows.push({
            suite: parts[0],
            D: Number(parts[1]),
            N: Number(parts[2]),
            sRe: Number(parts[3]),
            sIm: Number(parts[4]),
            lhs: Number(parts[5]),
            rhsOrMain: Number(parts[6]),
            residualOrRemainder: Number(parts[7]),
            h: Number(parts[8]),
            LD: Number(parts[9]),
            runtimeMs: Number(parts[10]),
        });
    }
    return rows;
}

export function readScanCsv(path: string): ScanRow[] {
    return parseScanCsv(readFileSync(path, "utf8"));
}
