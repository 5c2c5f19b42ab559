import { describe, expect, it } from "vitest";

import { ApiError, ConvovizClient } from "../src/api.js";

interface Call {
  url: string;
  init?: RequestInit;
}

/** fetch stub returning canned responses in order, recording every call. */
function stubClient(...responses: Response[]): { client: ConvovizClient; calls: Call[] } {
  const calls: Call[] = [];
  const client = new ConvovizClient("http://api.test/", async (url, init) => {
    calls.push({ url, init });
    const next = responses.shift();
    if (!next) throw new Error("stub ran out of responses");
    return next;
  });
  return { client, calls };
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("ConvovizClient", () => {
  it("trims trailing slashes off the base url", async () => {
    const { client, calls } = stubClient(json({ samples: ["houses"] }));
    await client.samples();
    expect(calls[0].url).toBe("http://api.test/samples");
  });

  it("unwraps the samples payload", async () => {
    const { client } = stubClient(json({ samples: ["houses", "olympics"] }));
    expect(await client.samples()).toEqual(["houses", "olympics"]);
  });

  it("posts analyze requests as JSON", async () => {
    const { client, calls } = stubClient(json({ dialogId: "0", queryId: "1" }));
    await client.analyze("s1", { query: "as a bar chart", dialog: true, dialogId: "0", queryId: "0" });
    expect(calls[0].url).toBe("http://api.test/sessions/s1/analyze");
    expect(calls[0].init?.method).toBe("POST");
    expect(calls[0].init?.headers).toEqual({ "content-type": "application/json" });
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      query: "as a bar chart",
      dialog: true,
      dialogId: "0",
      queryId: "0",
    });
  });

  it("sends resolutions together with the optional target ids", async () => {
    const { client, calls } = stubClient(json({}), json({}));
    await client.resolve("s1", { value: { hockey: ["Hockey"] } });
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      resolutions: { value: { hockey: ["Hockey"] } },
    });
    await client.resolve("s1", { attribute: { medals: "Total Medals" } }, { dialogId: "0", queryId: "0" });
    expect(JSON.parse(String(calls[1].init?.body))).toEqual({
      resolutions: { attribute: { medals: "Total Medals" } },
      dialogId: "0",
      queryId: "0",
    });
  });

  it("maps the error envelope onto ApiError", async () => {
    const { client } = stubClient(
      json({ error: { code: "no_conversation_to_follow_up", message: "nothing to follow up on" } }, 409),
    );
    const failure = await client.analyze("s1", { query: "more", dialog: true }).catch((e) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(409);
    expect(failure.code).toBe("no_conversation_to_follow_up");
    expect(failure.message).toBe("nothing to follow up on");
  });

  it("degrades gracefully when the error body is not the envelope", async () => {
    const { client } = stubClient(new Response("<html>bad gateway</html>", { status: 502 }));
    const failure = await client.samples().catch((e) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(502);
    expect(failure.code).toBe("http_error");
  });

  it("issues deletes with the optional queryId in the query string", async () => {
    const { client, calls } = stubClient(
      new Response(null, { status: 204 }),
      new Response(null, { status: 204 }),
    );
    await client.deleteDialog("s1", "0.1.0");
    await client.deleteDialog("s1", "0", "2");
    expect(calls[0].url).toBe("http://api.test/sessions/s1/dialogs/0.1.0");
    expect(calls[0].init?.method).toBe("DELETE");
    expect(calls[1].url).toBe("http://api.test/sessions/s1/dialogs/0?queryId=2");
  });

  it("raises ApiError for failed deletes", async () => {
    const { client } = stubClient(
      json({ error: { code: "target_not_found", message: "no dialog 7" } }, 404),
    );
    const failure = await client.deleteDialog("s1", "7").catch((e) => e);
    expect(failure.code).toBe("target_not_found");
  });
});
