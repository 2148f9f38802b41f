import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api";
import { bodyOf, jsonResponse, scriptedFetch } from "./helpers";

const LOGIN_BODY = { token: "tok123", user_id: "u1", expires_at: "2026-08-02T12:00:00+00:00" };

describe("ApiClient", () => {
  it("stores the token from login and sends it as a bearer header", async () => {
    const { calls, fetchImpl } = scriptedFetch([
      jsonResponse(200, LOGIN_BODY),
      jsonResponse(200, { user_id: "u1", history: [], points: 0, streak_days: 0, last_active_date: null, averages: {} }),
    ]);
    const api = new ApiClient("http://x", fetchImpl);
    await api.login("alice", "pw");
    expect(api.token).toBe("tok123");
    expect(api.userId).toBe("u1");

    await api.progress();
    const headers = calls[1].init?.headers as Record<string, string>;
    expect(headers["Authorization"]).toBe("Bearer tok123");
  });

  it("fails fast on authenticated calls without a token", async () => {
    const { calls, fetchImpl } = scriptedFetch([]);
    const api = new ApiClient("http://x", fetchImpl);
    await expect(api.tip()).rejects.toMatchObject({ status: 401 });
    expect(calls.length).toBe(0);
  });

  it("maps error bodies to ApiError with status and message", async () => {
    const { fetchImpl } = scriptedFetch([jsonResponse(503, { error: "provider down" })]);
    const api = new ApiClient("http://x", fetchImpl);
    api.token = "tok";
    const failure = await api.chat("hi", []).catch((e) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(503);
    expect(failure.message).toBe("provider down");
  });

  it("encodes static quiz parameters in the query string", async () => {
    const { calls, fetchImpl } = scriptedFetch([jsonResponse(200, {})]);
    const api = new ApiClient("http://x", fetchImpl);
    api.token = "tok";
    await api.staticQuiz("data structures", "beginner", 5);
    expect(calls[0].url).toBe(
      "http://x/api/quiz/static?topic=data+structures&difficulty=beginner&count=5",
    );
    expect(calls[0].init?.method).toBe("GET");
  });

  it("serializes roadmap requests with snake_case fields", async () => {
    const { calls, fetchImpl } = scriptedFetch([jsonResponse(200, {})]);
    const api = new ApiClient("http://x", fetchImpl);
    api.token = "tok";
    await api.roadmap(4, ["loops", "functions"], "python");
    expect(bodyOf(calls[0])).toEqual({
      timeline_weeks: 4,
      topics: ["loops", "functions"],
      language: "python",
    });
  });

  it("logout clears credentials", async () => {
    const { fetchImpl } = scriptedFetch([jsonResponse(200, LOGIN_BODY)]);
    const api = new ApiClient("http://x", fetchImpl);
    await api.login("alice", "pw");
    api.logout();
    expect(api.token).toBeNull();
    await expect(api.progress()).rejects.toMatchObject({ status: 401 });
  });
});
