import { describe, expect, it } from "vitest";

import { escapeHtml, renderDashboard, renderQuestion, renderResult, renderRoadmap, renderTranscript } from "../src/render";
import { parseTopics, validateRoadmapInput } from "../src/roadmap";
import { RESULT_FIXTURE } from "./helpers";
import type { Roadmap } from "../src/types";

describe("roadmap input validation", () => {
  it.each([
    [0, ["loops"]],
    [-3, ["loops"]],
    [2.5, ["loops"]],
    [NaN, ["loops"]],
  ])("rejects bad timeline %s", (weeks, topics) => {
    expect(validateRoadmapInput(weeks as number, topics)).toContain("timeline");
  });

  it("rejects empty or whitespace-only topics", () => {
    expect(validateRoadmapInput(4, [])).toContain("topic");
    expect(validateRoadmapInput(4, ["  ", ""])).toContain("topic");
  });

  it("accepts a well-formed request", () => {
    expect(validateRoadmapInput(4, ["loops", "functions"])).toBeNull();
  });

  it("parses comma-separated topics, dropping blanks", () => {
    expect(parseTopics(" loops, functions ,, recursion ")).toEqual([
      "loops",
      "functions",
      "recursion",
    ]);
  });
});

describe("renderers", () => {
  it("escapes markup in API content", () => {
    expect(escapeHtml('<script>"a" & b</script>')).toBe(
      "&lt;script&gt;&quot;a&quot; &amp; b&lt;/script&gt;",
    );
    const html = renderQuestion(
      { id: "q1", stem: "Is x < y?", options: ["<b>yes</b>", "no", "maybe", "never"] },
      0,
      3,
      undefined,
    );
    expect(html).toContain("Is x &lt; y?");
    expect(html).toContain("&lt;b&gt;yes&lt;/b&gt;");
    expect(html).not.toContain("<b>yes</b>");
  });

  it("renders question position and the selected option", () => {
    const html = renderQuestion(
      { id: "q2", stem: "Pick one", options: ["a", "b", "c", "d"] },
      1,
      3,
      2,
    );
    expect(html).toContain("Question 2 of 3");
    expect(html).toContain('value="2" checked');
  });

  it("renders the result with percent score and verbatim quote", () => {
    const html = renderResult(RESULT_FIXTURE);
    expect(html).toContain("Score: 67%");
    expect(html).toContain(RESULT_FIXTURE.quote.text);
    expect(html).toContain("Points: 67");
  });

  it("renders one card per milestone with week labels", () => {
    const roadmap: Roadmap = {
      user_id: "u1",
      timeline_weeks: 4,
      language: "python",
      milestones: [
        { title: "Milestone 1", topics: ["loops"], start_week: 1, end_week: 1, lessons: ["intro"] },
        { title: "Milestone 2", topics: ["functions"], start_week: 2, end_week: 3, lessons: [] },
        { title: "Milestone 3", topics: ["recursion"], start_week: 4, end_week: 4, lessons: [] },
      ],
    };
    const html = renderRoadmap(roadmap);
    expect(html.match(/class="milestone"/g)?.length).toBe(3);
    expect(html).toContain("Week 1");
    expect(html).toContain("Weeks 2-3");
    expect(html).toContain("Week 4");
    expect(html).toContain("4-week python plan");
  });

  it("renders chat badges and the outage banner", () => {
    const html = renderTranscript(
      [
        { role: "user", text: "hi" },
        { role: "assistant", text: "hello", badge: "grounded" },
        { role: "assistant", text: "not sure", badge: "fallback" },
      ],
      "assistant is unavailable",
    );
    expect(html).toContain("badge-grounded");
    expect(html).toContain("badge-fallback");
    expect(html).toContain('<div class="banner">assistant is unavailable</div>');
  });

  it("renders dashboard tip, tallies, and recent scores", () => {
    const html = renderDashboard({
      tip: { user_id: "u1", date: "2026-08-01", text: "Review one old quiz today.", derived_from: "abc" },
      progress: {
        user_id: "u1",
        history: [
          { topic: "loops", difficulty: "beginner", mode: "static", score_fraction: 0.8, duration_seconds: 9, date: "2026-08-01" },
        ],
        points: 80,
        streak_days: 1,
        last_active_date: "2026-08-01",
        averages: { loops: { beginner: 0.8 } },
      },
    });
    expect(html).toContain("Review one old quiz today.");
    expect(html).toContain("Points: 80");
    expect(html).toContain("loops (beginner): 80%");
  });
});
