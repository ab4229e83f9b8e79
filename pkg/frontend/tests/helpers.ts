// Test utilities that drive the Python backend: spawning a live server and
// replaying scripts headlessly through the CLI.

import { ChildProcess, execFile, spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import net from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

export function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = net.createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      const port = address.port;
      server.close(() => resolve(port));
    });
    server.on("error", reject);
  });
}

export function replayScenario(name: string, inputs: unknown[]): Promise<unknown> {
  const dir = mkdtempSync(join(tmpdir(), "topflow-ui-"));
  const file = join(dir, "inputs.json");
  writeFileSync(file, JSON.stringify(inputs));
  return new Promise((resolve, reject) => {
    execFile(
      "python3",
      ["-m", "topflow.cli", "script", "--example", name, "--inputs", file],
      { timeout: 30_000 },
      (error, stdout, stderr) => {
        if (error) {
          reject(new Error(`script replay failed: ${error.message}\n${stderr}`));
          return;
        }
        resolve(JSON.parse(stdout));
      },
    );
  });
}

export interface Backend {
  base: string;
  stop(): Promise<void>;
}

export async function startBackend(example: string): Promise<Backend> {
  const port = await freePort();
  const proc: ChildProcess = spawn(
    "python3",
    [
      "-m",
      "topflow.cli",
      "serve",
      "--example",
      example,
      "--port",
      String(port),
      "--log-level",
      "warning",
    ],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  const base = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 20_000;
  for (;;) {
    if (proc.exitCode !== null) {
      throw new Error(`backend exited early with code ${proc.exitCode}`);
    }
    try {
      const response = await fetch(`${base}/initial-task`);
      if (response.ok) {
        break;
      }
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      proc.kill("SIGKILL");
      throw new Error("backend did not become ready in time");
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  return {
    base,
    stop: () =>
      new Promise<void>((resolve) => {
        proc.once("exit", () => resolve());
        proc.kill("SIGINT");
        // Under the jsdom environment setTimeout may be the browser-style
        // one returning a number, so unref only when available.
        const killTimer = setTimeout(() => proc.kill("SIGKILL"), 5_000);
        (killTimer as { unref?: () => void }).unref?.();
      }),
  };
}
