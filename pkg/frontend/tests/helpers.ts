export type RecordedCall = { url: string; init?: RequestInit };

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** Fetch stub that replays a scripted list of responses and records calls. */
export function scriptedFetch(responses: Response[]) {
  const calls: RecordedCall[] = [];
  const fetchImpl = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    const next = responses.shift();
    if (!next) throw new Error(`unexpected fetch: ${url}`);
    return next;
  };
  return { calls, fetchImpl };
}

export function bodyOf(call: RecordedCall): any {
  return JSON.parse(String(call.init?.body));
}

export const SESSION_FIXTURE = {
  session_id: "s1",
  mode: "dynamic",
  topic: "loops",
  difficulty: "beginner",
  started_at: "2026-08-01T12:00:00+00:00",
  questions: [
    { id: "q1", stem: "What does a for loop do?", options: ["a", "b", "c", "d"] },
    { id: "q2", stem: "What ends a while loop?", options: ["a", "b", "c", "d"] },
    { id: "q3", stem: "What is a nested loop?", options: ["a", "b", "c", "d"] },
  ],
};

export const RESULT_FIXTURE = {
  session_id: "s1",
  score_fraction: 2 / 3,
  duration_seconds: 12.5,
  quote: { category: "encouraging", text: "Keep going, progress compounds." },
  points: 67,
  streak_days: 2,
};
