/**
 * Spawns the real catalogue service (plus the bundled SPARQL endpoint)
 * before the test run; integration tests read the URLs from
 * tests/.backend.json.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { writeFileSync, rmSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

const here = dirname(fileURLToPath(import.meta.url));
const backendFile = join(here, ".backend.json");

let child: ChildProcess | null = null;

async function waitReady(base: string): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${base}/api/sections`, {
        headers: { Connection: "close" },
      });
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  throw new Error(`service at ${base} never became ready`);
}

export default async function setup(): Promise<() => void> {
  child = spawn("python3", [join(here, "launch_backend.py")], {
    stdio: ["ignore", "pipe", "ignore"],
  });
  const urls = await new Promise<{ service: string; endpoint: string }>(
    (resolve, reject) => {
      let buffer = "";
      const timer = setTimeout(
        () => reject(new Error("backend start timeout")), 30000,
      );
      const onExit = (code: number | null) => {
        clearTimeout(timer);
        reject(new Error(`backend exited: ${code}`));
      };
      child!.on("exit", onExit);
      child!.stdout!.on("data", (chunk: Buffer) => {
        buffer += chunk.toString();
        const line = buffer.split("\n")[0];
        if (line.trim().startsWith("{")) {
          clearTimeout(timer);
          child!.off("exit", onExit);
          resolve(JSON.parse(line));
        }
      });
    },
  );
  await waitReady(urls.service);
  writeFileSync(backendFile, JSON.stringify(urls));
  // stop the child's pipe and handle from keeping vitest's loop alive;
  // the backend serves until teardown (or its parent watchdog) stops it
  child.stdout?.destroy();
  child.unref();

  return () => {
    child?.kill("SIGKILL");
    try {
      rmSync(backendFile);
    } catch {
      // already gone
    }
  };
}
