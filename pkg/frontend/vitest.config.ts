import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // the acceptance suite boots the real Python service
    testTimeout: 30_000,
    hookTimeout: 60_000,
  },
});
