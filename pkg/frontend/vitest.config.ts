import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    globalSetup: "./tests/globalSetup.ts",
    include: ["tests/**/*.test.ts"],
    testTimeout: 120_000,
    hookTimeout: 120_000,
    // One live service instance; run files serially so sessions do not
    // interleave their store writes mid-assertion.
    fileParallelism: false,
  },
});
