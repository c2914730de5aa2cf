// End-to-end equivalence: the viewer path (bridge + SceneDiff) must be
// byte-identical to the CLI path, and the downloaded command log must
// replay on the CLI to the same scene. Needs the engine installed
// (`pip install -e ..`) and python3 on PATH.

import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { CommandLog } from "../src/commandLog.js";
import { applySceneDiff, parseScene, serializeScene } from "../src/diff.js";
import type { SceneDiff } from "../src/types.js";

const BRIDGE = fileURLToPath(new URL("../bridge_server.py", import.meta.url));
const PORT = 18000 + (process.pid % 2000);
const BASE = `http://127.0.0.1:${PORT}`;

let bridge: ChildProcess;
let work: string;
let scenePath: string;
let sceneText: string;

async function post(path: string, body: string): Promise<Response> {
  return fetch(`${BASE}${path}`, { method: "POST", body });
}

async function sendCommands(commands: object[]): Promise<SceneDiff> {
  const response = await post("/command", JSON.stringify({ commands }));
  if (!response.ok) throw new Error((await response.json()).error);
  return (await response.json()).diff as SceneDiff;
}

beforeAll(async () => {
  work = mkdtempSync(join(tmpdir(), "cellspace-viewer-"));
  const notebook = join(work, "fixture50.ipynb");
  scenePath = join(work, "scene.json");
  execFileSync("cellspace", ["fixture", "--out", notebook]);
  execFileSync("cellspace", ["import", notebook, "--out", scenePath]);
  sceneText = readFileSync(scenePath, "utf-8");

  bridge = spawn("python3", [BRIDGE, "--port", String(PORT)], { stdio: ["ignore", "pipe", "pipe"] });
  for (let i = 0; i < 100; i++) {
    try {
      const r = await fetch(`${BASE}/health`);
      if (r.ok) return;
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 100));
    }
  }
  throw new Error("bridge did not come up");
}, 30000);

afterAll(() => {
  bridge?.kill();
});

describe("viewer/engine equivalence", () => {
  it("multi-row grid over all cells is byte-identical to the CLI, and the log replays", async () => {
    expect((await post("/scene", sceneText)).ok).toBe(true);
    let doc = parseScene(sceneText);
    const allIds = doc.cells.map((c) => c.id);

    const log = new CommandLog();
    const command = log.stamp({
      command: "create_grid",
      orientation: "horizontal",
      rows: 5,
      selection: allIds,
    });
    const diff = await sendCommands([command]);
    log.append([command]);
    doc = applySceneDiff(doc, diff);

    const direct = join(work, "direct.json");
    execFileSync("cellspace", [
      "apply", scenePath, "--select", "all", "--structure", "multi-row-grid", "--rows", "5",
      "--out", direct,
    ]);
    const directBytes = readFileSync(direct, "utf-8");

    // Engine-side scene after the viewer command == CLI output.
    const bridgeBytes = await (await fetch(`${BASE}/scene`)).text();
    expect(bridgeBytes).toBe(directBytes);

    // Viewer-side scene (prior scene + diff), serialized by the viewer.
    expect(serializeScene(doc)).toBe(directBytes);

    // The downloaded command log replays on the CLI to the same scene.
    const logPath = join(work, "commands.jsonl");
    writeFileSync(logPath, log.toJsonl());
    const replayed = join(work, "replayed.json");
    execFileSync("cellspace", ["replay", scenePath, logPath, "--commands", "--out", replayed]);
    expect(readFileSync(replayed, "utf-8")).toBe(directBytes);
  }, 30000);

  it("engine errors surface and leave the scene unchanged", async () => {
    expect((await post("/scene", sceneText)).ok).toBe(true);
    const doc = parseScene(sceneText);
    const response = await post(
      "/command",
      JSON.stringify({ commands: [{ command: "create_loop_circle", selection: [doc.cells[0].id], t: 1 }] })
    );
    expect(response.status).toBe(422);
    const body = await response.json();
    expect(String(body.error)).toContain("loop");
    expect(await (await fetch(`${BASE}/scene`)).text()).toBe(sceneText);
  }, 30000);

  it("a multi-command session stays in sync with the engine byte for byte", async () => {
    expect((await post("/scene", sceneText)).ok).toBe(true);
    let doc = parseScene(sceneText);
    const code = doc.cells.filter((c) => c.kind !== "markdown").map((c) => c.id);
    const log = new CommandLog();

    const steps = [
      { command: "create_linear_linear", selection: code.slice(0, 10) },
      { command: "cycle_cluster_mode", structure: "s0" },
      { command: "toggle_indicators", selection: code.slice(20, 30) },
    ];
    for (const step of steps) {
      const stamped = log.stamp(step);
      const diff = await sendCommands([stamped]);
      log.append([stamped]);
      doc = applySceneDiff(doc, diff);
    }
    const bridgeBytes = await (await fetch(`${BASE}/scene`)).text();
    expect(serializeScene(doc)).toBe(bridgeBytes);

    const logPath = join(work, "session.jsonl");
    writeFileSync(logPath, log.toJsonl());
    const replayed = join(work, "session.json");
    execFileSync("cellspace", ["replay", scenePath, logPath, "--commands", "--out", replayed]);
    expect(readFileSync(replayed, "utf-8")).toBe(bridgeBytes);
  }, 30000);
});
