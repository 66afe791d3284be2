import { describe, expect, it } from "vitest";

import { ApiError, StaleRevisionError, StudioClient } from "../src/api.js";
import { emptyCanvasDoc, makeFetch } from "./fake_server.js";

describe("StudioClient", () => {
  it("creates and fetches canvases", async () => {
    const { fetchImpl, calls } = makeFetch({
      "POST /canvas": () => ({ json: emptyCanvasDoc("c7") }),
      "GET /canvas/c7": () => ({ json: emptyCanvasDoc("c7", 3) }),
    });
    const client = new StudioClient("http://api", fetchImpl);
    const created = await client.createCanvas();
    expect(created.canvas.id).toBe("c7");
    const fetched = await client.getCanvas("c7");
    expect(fetched.canvas.revision).toBe(3);
    expect(calls.map((c) => c.path)).toEqual(["/canvas", "/canvas/c7"]);
  });

  it("link posts exactly one request with from/to", async () => {
    const { fetchImpl, calls } = makeFetch({
      "POST /canvas/c1/link": (call) => ({
        json: {
          edge: { from: (call.body as any).from, to: (call.body as any).to, kind: "customization" },
          target: { id: "b2", kind: "image_rec", payload: {}, x: 0, y: 0 },
        },
      }),
    });
    const client = new StudioClient("http://api", fetchImpl);
    const { edge } = await client.link("c1", "b3", "b2");
    expect(edge).toEqual({ from: "b3", to: "b2", kind: "customization" });
    expect(calls).toHaveLength(1);
    expect(calls[0]?.body).toEqual({ from: "b3", to: "b2" });
  });

  it("surfaces the error envelope as a typed ApiError", async () => {
    const { fetchImpl } = makeFetch({
      "POST /recommend/captions": () => ({
        status: 502,
        json: {
          error: { code: "provider_failure", message: "upstream down", provider: "chat" },
        },
      }),
    });
    const client = new StudioClient("http://api", fetchImpl);
    const err = await client.recommendCaptions("juice").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("provider_failure");
    expect(err.provider).toBe("chat");
    expect(err.status).toBe(502);
  });

  it("a stale PUT raises StaleRevisionError so the UI can prompt a reload", async () => {
    const { fetchImpl } = makeFetch({
      "PUT /canvas/c1": () => ({
        status: 409,
        json: { error: { code: "conflict", message: "stale revision 1 < 4" } },
      }),
    });
    const client = new StudioClient("http://api", fetchImpl);
    const err = await client.putCanvas("c1", emptyCanvasDoc("c1", 1) as any).catch((e) => e);
    expect(err).toBeInstanceOf(StaleRevisionError);
  });

  it("generate forwards options such as the chosen keyword", async () => {
    const { fetchImpl, calls } = makeFetch({
      "POST /canvas/c1/generate": () => ({
        json: { id: "b9", kind: "image_rec", payload: {}, x: 0, y: 0 },
      }),
    });
    const client = new StudioClient("http://api", fetchImpl);
    await client.generate("c1", "b2", "images", { chosen_keyword: "orange" });
    expect(calls[0]?.body).toEqual({ source: "b2", what: "images", chosen_keyword: "orange" });
  });
});
