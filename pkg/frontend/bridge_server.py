"""Local command bridge between the browser viewer and the engine CLI.

Holds the current scene document and applies every mutation by invoking
the `cellspace` command line tool on real files, so scenes produced
through the viewer are byte-identical to scenes produced by the CLI by
construction. The protocol:

    POST /scene    body = scene JSON text        -> {"ok": true}
    POST /command  {"commands": [<command>...]}  -> {"diff": <SceneDiff>}
    GET  /scene    -> the current canonical scene JSON text
    GET  /health   -> {"ok": true}

A SceneDiff lists exactly the records that changed between consecutive
scene documents; applying it to the prior document reproduces the
engine's new document field for field.
"""

from __future__ import annotations

import argparse
import json
import subprocess
import sys
import tempfile
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

CLI = ["cellspace"]


def compute_diff(old: dict, new: dict) -> dict:
    """Minimal delta between two scene documents."""

    def keyed(records, key):
        return {key(r): r for r in records}

    old_cells = keyed(old.get("cells", []), lambda r: r["id"])
    new_cells = keyed(new.get("cells", []), lambda r: r["id"])
    old_edges = keyed(old.get("edges", []), lambda r: (r["from"], r["to"]))
    new_edges = keyed(new.get("edges", []), lambda r: (r["from"], r["to"]))
    old_structs = keyed(old.get("structures", []), lambda r: r["id"])
    new_structs = keyed(new.get("structures", []), lambda r: r["id"])

    diff = {
        "changed_cells": [r for k, r in new_cells.items() if old_cells.get(k) != r],
        "removed_cells": sorted(k for k in old_cells if k not in new_cells),
        "changed_edges": [r for k, r in new_edges.items() if old_edges.get(k) != r],
        "removed_edges": [list(k) for k in sorted(old_edges) if k not in new_edges],
        "changed_structures": [r for k, r in new_structs.items() if old_structs.get(k) != r],
        "removed_structures": sorted(k for k in old_structs if k not in new_structs),
        "config": new.get("config") if new.get("config") != old.get("config") else None,
    }
    return diff


class BridgeState:
    def __init__(self, workdir: Path):
        self.workdir = workdir
        self.scene_path = workdir / "scene.json"
        self.scene_text: str | None = None

    def load_scene(self, text: str) -> None:
        json.loads(text)  # reject malformed documents before accepting
        self.scene_path.write_text(text, encoding="utf-8")
        result = subprocess.run(CLI + ["validate", str(self.scene_path)], capture_output=True, text=True)
        if result.returncode not in (0, 1):
            raise ValueError(result.stderr.strip() or "scene rejected")
        self.scene_text = text

    def apply_commands(self, commands: list[dict]) -> dict:
        if self.scene_text is None:
            raise ValueError("no scene loaded")
        commands_path = self.workdir / "commands.jsonl"
        out_path = self.workdir / "next.json"
        commands_path.write_text(
            "".join(json.dumps(c, sort_keys=True) + "\n" for c in commands), encoding="utf-8"
        )
        result = subprocess.run(
            CLI + ["replay", str(self.scene_path), str(commands_path), "--commands", "--out", str(out_path)],
            capture_output=True,
            text=True,
        )
        if result.returncode != 0:
            raise ValueError(result.stderr.strip() or "engine rejected the command")
        new_text = out_path.read_text(encoding="utf-8")
        diff = compute_diff(json.loads(self.scene_text), json.loads(new_text))
        self.scene_text = new_text
        self.scene_path.write_text(new_text, encoding="utf-8")
        return diff


def make_handler(state: BridgeState):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):  # quiet
            pass

        def _send(self, code: int, body: str, content_type: str = "application/json") -> None:
            payload = body.encode("utf-8")
            self.send_response(code)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(payload)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(payload)

        def do_OPTIONS(self):
            self._send(204, "")

        def do_GET(self):
            if self.path == "/health":
                self._send(200, '{"ok":true}')
            elif self.path == "/scene":
                if state.scene_text is None:
                    self._send(404, '{"error":"no scene loaded"}')
                else:
                    self._send(200, state.scene_text)
            else:
                self._send(404, '{"error":"not found"}')

        def do_POST(self):
            length = int(self.headers.get("Content-Length", "0"))
            body = self.rfile.read(length).decode("utf-8")
            try:
                if self.path == "/scene":
                    state.load_scene(body)
                    self._send(200, '{"ok":true}')
                elif self.path == "/command":
                    request = json.loads(body)
                    commands = request.get("commands")
                    if not isinstance(commands, list) or not commands:
                        raise ValueError('body must be {"commands": [...]}')
                    diff = state.apply_commands(commands)
                    self._send(200, json.dumps({"diff": diff}))
                else:
                    self._send(404, '{"error":"not found"}')
            except (ValueError, json.JSONDecodeError) as exc:
                self._send(422, json.dumps({"error": str(exc)}))

    return Handler


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="cellspace viewer bridge")
    parser.add_argument("--port", type=int, default=8377)
    parser.add_argument("--host", default="127.0.0.1")
    args = parser.parse_args(argv)

    with tempfile.TemporaryDirectory(prefix="cellspace-bridge-") as workdir:
        state = BridgeState(Path(workdir))
        server = HTTPServer((args.host, args.port), make_handler(state))
        print(f"bridge listening on {server.server_address[0]}:{server.server_address[1]}", flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
