import { defineConfig } from "vite";

export default defineConfig({
  build: { outDir: "dist" },
  server: {
    proxy: {
      "/sessions": "http://127.0.0.1:8080",
      "/healthz": "http://127.0.0.1:8080",
    },
  },
  test: {
    environment: "jsdom",
  },
});
