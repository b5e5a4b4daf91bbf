/**
 * Plot CLI: render the solver CLI's output files to PNG.
 *
 *   node dist/src/plot.js --kind field      --in <dir> --out img.png
 *   node dist/src/plot.js --kind placement  --in <dir> --out img.png
 *   node dist/src/plot.js --kind zeta       --in <dir> --out img.png
 *   node dist/src/plot.js --kind convergence --in <dir> --out img.png
 *
 * field reads field.csv; placement/zeta read diagnostics.json; convergence
 * reads study.csv. Optional: --width N --height N --color re|abs.
 * Exit codes: 0 ok, 2 schema mismatch (offending field printed), 64 usage.
 */
import { writeFileSync } from "node:fs";
import { join } from "node:path";

import { encodePng } from "./png";
import { loadDiagnostics, loadFieldCsv, loadStudyCsv, SchemaError } from "./schema";
import {
  DEFAULTS,
  renderConvergence,
  renderField,
  renderPlacement,
  renderZeta,
} from "./render";

const KINDS = ["field", "placement", "zeta", "convergence"] as const;
type Kind = (typeof KINDS)[number];

interface Args {
  kind: Kind;
  inDir: string;
  out: string;
  width: number;
  height: number;
  color: "re" | "abs";
}

function parseArgs(argv: string[]): Args {
  const get = (flag: string): string | undefined => {
    const i = argv.indexOf(flag);
    return i >= 0 && i + 1 < argv.length ? argv[i + 1] : undefined;
  };
  const kind = get("--kind");
  const inDir = get("--in");
  const out = get("--out");
  if (!kind || !inDir || !out)
    throw new UsageError("required flags: --kind <kind> --in <dir> --out <file>");
  if (!KINDS.includes(kind as Kind))
    throw new UsageError(`unknown kind '${kind}'; expected one of ${KINDS.join(", ")}`);
  const width = Number(get("--width") ?? DEFAULTS.width);
  const height = Number(get("--height") ?? DEFAULTS.height);
  if (!Number.isInteger(width) || !Number.isInteger(height) || width < 2 || height < 2)
    throw new UsageError("--width/--height must be integers >= 2");
  const color = (get("--color") ?? "re") as "re" | "abs";
  if (color !== "re" && color !== "abs") throw new UsageError("--color must be re or abs");
  return { kind: kind as Kind, inDir, out, width, height, color };
}

class UsageError extends Error {}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (e) {
    console.error(`usage error: ${(e as Error).message}`);
    return 64;
  }
  try {
    const opts = { width: args.width, height: args.height, color: args.color };
    let img;
    switch (args.kind) {
      case "field":
        img = renderField(loadFieldCsv(join(args.inDir, "field.csv")), opts);
        break;
      case "placement":
        img = renderPlacement(loadDiagnostics(join(args.inDir, "diagnostics.json")), opts);
        break;
      case "zeta":
        img = renderZeta(loadDiagnostics(join(args.inDir, "diagnostics.json")), opts);
        break;
      case "convergence":
        img = renderConvergence(loadStudyCsv(join(args.inDir, "study.csv")), opts);
        break;
    }
    writeFileSync(args.out, encodePng(img));
    return 0;
  } catch (e) {
    if (e instanceof SchemaError) {
      console.error(`schema mismatch: ${e.message}`);
      return 2;
    }
    console.error(`error: ${(e as Error).message}`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(run(process.argv.slice(2)));
}
