// Every user action that reaches the engine is appended here; the log
// downloads as JSON Lines in the same format the gesture interpreter
// emits, so `cellspace replay <scene> <log> --commands` reproduces the
// viewer's scene exactly.

import type { ViewerCommand } from "./types.js";

export class CommandLog {
  private entries: ViewerCommand[] = [];
  private clock = 0;

  stamp(command: Omit<ViewerCommand, "t">): ViewerCommand {
    this.clock += 1;
    return { ...command, t: this.clock } as ViewerCommand;
  }

  append(commands: ViewerCommand[]): void {
    this.entries.push(...commands);
  }

  all(): ViewerCommand[] {
    return [...this.entries];
  }

  toJsonl(): string {
    return this.entries
      .map((entry) => JSON.stringify(sortKeys(entry)))
      .map((line) => line + "\n")
      .join("");
  }

  clear(): void {
    this.entries = [];
    this.clock = 0;
  }
}

function sortKeys(record: Record<string, unknown>): Record<string, unknown> {
  const out: Record<string, unknown> = {};
  for (const key of Object.keys(record).sort()) {
    out[key] = record[key];
  }
  return out;
}
