/**
 * Parity suite: for the golden molecule and reaction fixtures the
 * binding must produce exactly the records the native command line
 * produces, after JSON normalization.
 */

import { execFileSync } from "node:child_process";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import {
  annotateReaction,
  annotateReactionsMany,
  canonicalize,
  loadCatalog,
  perceive,
  perceiveMany,
  score,
} from "../src/index.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const FIXTURES = join(HERE, "..", "..", "tests", "fixtures");

function nativeJsonl(args: string[], stdin: string): Record<string, unknown>[] {
  let stdout: string;
  try {
    stdout = execFileSync("python3", ["-m", "fgkit.cli", ...args], {
      input: stdin,
      maxBuffer: 256 * 1024 * 1024,
      encoding: "utf-8",
    });
  } catch (error) {
    // Exit status 1 marks per-record errors; the JSONL on stdout is
    // still the native output under comparison.
    const failed = error as { status?: number; stdout?: string };
    if (failed.status === 1 && typeof failed.stdout === "string") {
      stdout = failed.stdout;
    } else {
      throw error;
    }
  }
  return stdout
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as Record<string, unknown>);
}

function goldenMolecules(): string[] {
  const raw = JSON.parse(
    readFileSync(join(FIXTURES, "golden_molecules.json"), "utf-8"),
  ) as { smiles: string }[];
  return raw.map((entry) => entry.smiles);
}

function goldenReactions(): string[] {
  return readFileSync(join(FIXTURES, "reactions_100.smi"), "utf-8")
    .split("\n")
    .filter((line) => line.trim().length > 0);
}

describe("handle", () => {
  it("reports the native version", async () => {
    const handle = await loadCatalog();
    expect(handle.version).toMatch(/^fgkit \d/);
  });

  it("rejects an unloadable catalog at load time", async () => {
    await expect(loadCatalog("/nonexistent/catalog.tsv")).rejects.toThrow();
  });
});

describe("molecule parity", () => {
  it("matches native annotate-mol over the golden fixture", async () => {
    const handle = await loadCatalog();
    const smiles = goldenMolecules();
    const native = nativeJsonl(
      ["annotate-mol", "--input", "-", "--output", "-"],
      smiles.join("\n") + "\n",
    );
    const bound = await perceiveMany(smiles, handle);
    expect(bound).toEqual(native);
  }, 60000);

  it("exposes single-molecule perception and canonical form", async () => {
    const handle = await loadCatalog();
    expect(await perceive("CCO", handle)).toEqual([
      { name: "alcohol", atoms: [1, 2] },
    ]);
    expect(await canonicalize("OCC", handle)).toBe("CCO");
  }, 30000);

  it("surfaces native parse diagnostics as exceptions", async () => {
    const handle = await loadCatalog();
    const native = nativeJsonl(
      ["annotate-mol", "--input", "-", "--output", "-"],
      "not-smiles\n",
    );
    await expect(perceive("not-smiles", handle)).rejects.toThrow(
      String(native[0].error),
    );
    await expect(perceive("", handle)).rejects.toThrow(/empty/);
  }, 30000);
});

describe("reaction parity", () => {
  it("matches native annotate-rxn over the reaction fixture", async () => {
    const handle = await loadCatalog();
    const reactions = goldenReactions();
    const native = nativeJsonl(
      ["annotate-rxn", "--input", "-", "--output", "-"],
      reactions.join("\n") + "\n",
    );
    const bound = await annotateReactionsMany(reactions, handle);
    expect(bound).toEqual(native);
  }, 120000);

  it("keeps the native quality flag for unmapped reactions", async () => {
    const handle = await loadCatalog();
    const change = await annotateReaction("CC>>CC", handle);
    expect(change.quality).toBe("unannotated-error");
  }, 30000);

  it("throws the native diagnostic for malformed reactions", async () => {
    const handle = await loadCatalog();
    await expect(annotateReaction("CC>CC", handle)).rejects.toThrow(
      /reactants>reagents>products/,
    );
    await expect(annotateReaction("", handle)).rejects.toThrow(/empty/);
  }, 30000);
});

describe("scoring parity", () => {
  it("matches the native reward records", async () => {
    const handle = await loadCatalog();
    const response = "<think>r</think><answer>OCC</answer>";
    const native = nativeJsonl(
      ["score", "--input", "-", "--output", "-"],
      JSON.stringify({ response, gold: "CCO", task_kind: "smiles" }) + "\n",
    );
    const bound = await score(response, "CCO", "smiles", handle);
    expect(bound).toEqual(native[0]);
    expect(bound.total).toBe(2);
  }, 30000);
});

describe("custom catalog pass-through", () => {
  it("honours an exported catalog file", async () => {
    const exported = execFileSync(
      "python3",
      ["-m", "fgkit.cli", "export-catalog", "--output", "-"],
      { encoding: "utf-8", maxBuffer: 64 * 1024 * 1024 },
    );
    const { mkdtempSync, writeFileSync } = await import("node:fs");
    const { tmpdir } = await import("node:os");
    const dir = mkdtempSync(join(tmpdir(), "fgkit-"));
    const catalogPath = join(dir, "catalog.tsv");
    writeFileSync(catalogPath, exported);
    const handle = await loadCatalog(catalogPath);
    expect(await perceive("CC(=O)O", handle)).toEqual([
      { name: "carboxylic acid", atoms: [1, 2, 3] },
    ]);
  }, 60000);
});
