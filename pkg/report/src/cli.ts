import { writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { readScanCsv } from "./csv";
import { FIGURE_KINDS, FigureKind, renderFigure } from "./figures";

function usage(): string {
    return `usage: cli --input scan.csv --kind ${FIGURE_KINDS.join("|")} --output figure.svg`;
}

export function main(argv: string[]): number {
    let values;
    try {
        ({ values } = parseArgs({
            args: argv,
            options: {
                input: { type: "string" },
                kind: { type: "string" },
                output: { type: "string" },
            },
        }));
    } catch (err) {
        process.stderr.write(`${(err as Error).message}\n${usage()}\n`);
        return 1;
    }
    const { input, kind, output } = values;
    if (!input || !kind || !output) {
        process.stderr.write(usage() + "\n");
        return 1;
    }
    if (!(FIGURE_KINDS as string[]).includes(kind)) {
        process.stderr.write(`unknown figure kind: ${kind}\n${usage()}\n`);
        return 1;
    }
    let result;
    try {
        const rows = readScanCsv(input);
        result = renderFigure(kind as FigureKind, rows);
    } catch (err) {
        // no output file on failure, empty input included
        process.stderr.write(`${(err as Error).message}\n`);
        return 1;
    }
    writeFileSync(output, result.svg);
    for (const line of result.lines) {
        process.stdout.write(line + "\n");
    }
    return 0;
}

if (require.main === module) {
    process.exit(main(process.argv.slice(2)));
}
