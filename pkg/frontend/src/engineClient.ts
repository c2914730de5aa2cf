// HTTP client for the engine bridge. Commands are sent sequentially (at
// most one in flight); every mutation returns the SceneDiff the engine
// produced.

import type { SceneDiff, ViewerCommand } from "./types.js";

export class EngineError extends Error {}

export class EngineClient {
  private busy: Promise<unknown> = Promise.resolve();

  constructor(readonly baseUrl: string) {}

  private enqueue<T>(task: () => Promise<T>): Promise<T> {
    const next = this.busy.then(task, task);
    this.busy = next.catch(() => undefined);
    return next;
  }

  loadScene(sceneText: string): Promise<void> {
    return this.enqueue(async () => {
      const response = await fetch(`${this.baseUrl}/scene`, { method: "POST", body: sceneText });
      if (!response.ok) {
        throw new EngineError(await errorText(response));
      }
    });
  }

  sendCommands(commands: ViewerCommand[]): Promise<SceneDiff> {
    return this.enqueue(async () => {
      const response = await fetch(`${this.baseUrl}/command`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ commands }),
      });
      if (!response.ok) {
        throw new EngineError(await errorText(response));
      }
      const body = (await response.json()) as { diff: SceneDiff };
      return body.diff;
    });
  }

  fetchSceneText(): Promise<string> {
    return this.enqueue(async () => {
      const response = await fetch(`${this.baseUrl}/scene`);
      if (!response.ok) {
        throw new EngineError(await errorText(response));
      }
      return response.text();
    });
  }
}

async function errorText(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { error?: string };
    return body.error ?? `engine error ${response.status}`;
  } catch {
    return `engine error ${response.status}`;
  }
}
