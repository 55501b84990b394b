/**
 * Thin binding onto the fgkit toolkit.
 *
 * Every call shells out to the fgkit command line and exchanges the
 * same JSON Lines records the CLI emits, so binding output is
 * byte-equivalent to native output by construction; no chemistry logic
 * lives on this side.  Native per-record diagnostics surface as thrown
 * Errors carrying the native message.
 */

import { execFile } from "node:child_process";

export interface FgMatch {
  name: string;
  atoms: number[];
}

export interface MolAnnotation {
  smiles: string;
  canonical: string;
  functional_groups: FgMatch[];
}

export interface RxnGroup {
  name: string;
  molecule: number;
  atoms: number[];
}

export interface RingEvents {
  count: number;
  sizes: number[];
}

export interface BondChange {
  atoms: [number, number];
  before: string | null;
  after: string | null;
}

export interface ChangeSet {
  rxn_smiles: string;
  reacting_groups: RxnGroup[];
  resulting_groups: RxnGroup[];
  rings_broken: RingEvents;
  rings_formed: RingEvents;
  extra_bond_changes: BondChange[];
  quality: string;
  description: string;
  error?: string;
}

export interface RewardResult {
  format_score: number;
  accuracy_score: number;
  total: number;
  diagnostics: string[];
}

export type TaskKind = "smiles" | "choice" | "exact_text";

export interface BindingHandle {
  /** Optional catalog file; the bundled 241-group default otherwise. */
  catalogPath?: string;
  /** Native toolkit version string, e.g. "fgkit 0.1.0". */
  version: string;
  /** Command used to reach the toolkit (default: python3 -m fgkit.cli). */
  command: string[];
}

const DEFAULT_COMMAND = ["python3", "-m", "fgkit.cli"];

function run(
  command: string[],
  args: string[],
  stdin: string,
): Promise<{ stdout: string; code: number }> {
  const [head, ...rest] = command;
  return new Promise((resolve, reject) => {
    const child = execFile(
      head,
      [...rest, ...args],
      { maxBuffer: 256 * 1024 * 1024 },
      (error, stdout) => {
        const anyError = error as NodeJS.ErrnoException | null;
        if (anyError && anyError.code === "ENOENT") {
          reject(new Error(`cannot launch ${head}: not found`));
          return;
        }
        // Exit code 1 means per-record errors, which the caller
        // inspects record by record; only launch/config failures reject.
        const code = child.exitCode ?? 0;
        if (code > 1) {
          reject(new Error(`fgkit exited with status ${code}`));
          return;
        }
        resolve({ stdout: stdout ?? "", code });
      },
    );
    child.stdin?.write(stdin);
    child.stdin?.end();
  });
}

function catalogArgs(handle: BindingHandle): string[] {
  return handle.catalogPath ? ["--catalog", handle.catalogPath] : [];
}

function parseJsonl(stdout: string): Record<string, unknown>[] {
  return stdout
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as Record<string, unknown>);
}

/** Load a catalog handle, verifying the native side is reachable. */
export async function loadCatalog(
  catalogPath?: string,
  command: string[] = DEFAULT_COMMAND,
): Promise<BindingHandle> {
  const version = await run(command, ["--version"], "");
  const handle: BindingHandle = {
    catalogPath,
    version: version.stdout.trim(),
    command,
  };
  if (catalogPath) {
    // A bad catalog file must fail at load time, not on first use.
    const probe = await run(
      command,
      ["annotate-mol", "--input", "-", "--output", "-", "--catalog", catalogPath],
      "C\n",
    );
    if (parseJsonl(probe.stdout).length !== 1) {
      throw new Error(`catalog at ${catalogPath} failed to load`);
    }
  }
  return handle;
}

/** Annotate a batch of SMILES in one native call, preserving order. */
export async function perceiveMany(
  smilesList: string[],
  handle: BindingHandle,
): Promise<MolAnnotation[]> {
  for (const s of smilesList) {
    if (!s || !s.trim()) {
      throw new Error("empty SMILES input");
    }
  }
  const { stdout } = await run(
    handle.command,
    ["annotate-mol", "--input", "-", "--output", "-", ...catalogArgs(handle)],
    smilesList.join("\n") + "\n",
  );
  const records = parseJsonl(stdout);
  return records.map((record) => {
    if (typeof record.error === "string") {
      throw new Error(record.error);
    }
    return record as unknown as MolAnnotation;
  });
}

/** Functional groups of one molecule; parse errors throw the native
 * diagnostic. */
export async function perceive(
  smiles: string,
  handle: BindingHandle,
): Promise<FgMatch[]> {
  const [annotation] = await perceiveMany([smiles], handle);
  return annotation.functional_groups;
}

/** Canonical SMILES via the native writer. */
export async function canonicalize(
  smiles: string,
  handle: BindingHandle,
): Promise<string> {
  const [annotation] = await perceiveMany([smiles], handle);
  return annotation.canonical;
}

/** Annotate a batch of atom-mapped reactions in one native call. */
export async function annotateReactionsMany(
  reactions: string[],
  handle: BindingHandle,
): Promise<ChangeSet[]> {
  for (const r of reactions) {
    if (!r || !r.trim()) {
      throw new Error("empty reaction input");
    }
  }
  const { stdout } = await run(
    handle.command,
    ["annotate-rxn", "--input", "-", "--output", "-", ...catalogArgs(handle)],
    reactions.join("\n") + "\n",
  );
  return parseJsonl(stdout).map((record) => {
    if (record.quality === "invalid") {
      throw new Error(String(record.error ?? "invalid reaction"));
    }
    // Unannotatable-but-parseable reactions keep their quality flag,
    // matching native records.
    return record as unknown as ChangeSet;
  });
}

/** Change set of one reaction; malformed input throws, unmapped input
 * returns its native quality flag. */
export async function annotateReaction(
  rxnSmiles: string,
  handle: BindingHandle,
): Promise<ChangeSet> {
  const [change] = await annotateReactionsMany([rxnSmiles], handle);
  return change;
}

/** Score one response/gold pair with the native reward functions. */
export async function score(
  response: string,
  gold: string,
  taskKind: TaskKind,
  handle: BindingHandle,
): Promise<RewardResult> {
  const payload =
    JSON.stringify({ response, gold, task_kind: taskKind }) + "\n";
  const { stdout } = await run(
    handle.command,
    ["score", "--input", "-", "--output", "-"],
    payload,
  );
  const [record] = parseJsonl(stdout);
  if (typeof record.error === "string") {
    throw new Error(record.error);
  }
  return record as unknown as RewardResult;
}
