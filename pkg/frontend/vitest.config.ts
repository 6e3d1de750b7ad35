import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    // The deployed UI is served same-origin by the catalogue service; the
    // test window is not, so same-origin enforcement is off here.
    environmentOptions: {
      happyDOM: {
        settings: { fetch: { disableSameOriginPolicy: true } },
      },
    },
    globalSetup: ["tests/global-setup.ts"],
    // keep-alive sockets to the spawned backend outlive the tests;
    // forked workers exit cleanly regardless
    pool: "forks",
    testTimeout: 30000,
    hookTimeout: 60000,
  },
});
