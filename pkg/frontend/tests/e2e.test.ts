import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ChildProcess, spawn, spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { ApiClient } from "../src/api";
import { ChatPanel } from "../src/chat";
import { QuizFlow } from "../src/quiz";
import { renderDashboard, renderResult, renderRoadmap } from "../src/render";

// Full-stack pass: seeds a corpus, boots the real service on an
// ephemeral port, and drives it through the same client code the
// browser uses.

const TOPICS = ["loops", "functions", "recursion"];
const ANXIETY_PATTERN = "I feel anxious about my coding progress";

function questionLine(topic: string, i: number): string {
  return JSON.stringify({
    id: `${topic}-q${i}`,
    topic,
    difficulty: "beginner",
    stem: `Which statement about ${topic} is true? (seed ${i})`,
    options: [`${topic} fact ${i}A`, `${topic} fact ${i}B`, `${topic} fact ${i}C`, `${topic} fact ${i}D`],
    correct_index: i % 4,
    explanation: `Option ${i % 4} is the accepted definition for ${topic}.`,
  });
}

const INTENTS = [
  {
    tag: "anxiety",
    patterns: [ANXIETY_PATTERN, "worried I am not improving fast enough"],
    responses: ["Feeling anxious while learning is common. Small daily steps add up."],
  },
  {
    tag: "greeting",
    patterns: ["hello there assistant", "good morning study buddy"],
    responses: ["Hello! Ready to practice something today?"],
  },
];

let workDir: string;
let server: ChildProcess | undefined;
let api: ApiClient;

function runCli(args: string[]) {
  const result = spawnSync("python3", ["-m", "codelearn.cli", "--data-dir", join(workDir, "data"), ...args], {
    encoding: "utf-8",
  });
  if (result.status !== 0) {
    throw new Error(`cli ${args.join(" ")} failed: ${result.stdout}${result.stderr}`);
  }
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "codelearn-ui-e2e-"));
  const questions = TOPICS.flatMap((topic) =>
    [0, 1, 2].map((i) => questionLine(topic, i)),
  ).join("\n");
  writeFileSync(join(workDir, "questions.jsonl"), questions + "\n");
  writeFileSync(join(workDir, "intents.json"), JSON.stringify(INTENTS));
  runCli(["ingest", "questions", join(workDir, "questions.jsonl")]);
  runCli(["ingest", "intents", join(workDir, "intents.json")]);

  server = spawn(
    "python3",
    ["-m", "codelearn.cli", "--data-dir", join(workDir, "data"), "serve", "--port", "0"],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  const port = await new Promise<number>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("server did not start")), 30000);
    let buffer = "";
    server!.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/listening on 127\.0\.0\.1:(\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(Number(match[1]));
      }
    });
    server!.on("exit", (code) => reject(new Error(`server exited early (${code})`)));
  });
  api = new ApiClient(`http://127.0.0.1:${port}`);
  // wait until the app is actually accepting requests
  for (let i = 0; i < 50; i++) {
    try {
      await api.register(`probe${i}`, "pw");
      break;
    } catch (err: any) {
      if (err?.status !== undefined) break;
      await new Promise((r) => setTimeout(r, 200));
    }
  }
});

afterAll(() => {
  server?.kill();
  if (workDir) rmSync(workDir, { recursive: true, force: true });
});

describe("browser flow against the live service", () => {
  it("logs in, takes a dynamic quiz, and shows the quote verbatim", async () => {
    await api.register("erin", "hunter2");
    await api.login("erin", "hunter2");
    expect(api.token).toBeTruthy();

    const flow = new QuizFlow(api);
    await flow.start("loops", "beginner", 3, "dynamic");
    expect(flow.phase).toBe("active");
    expect(flow.questions.length).toBe(3);
    for (const question of flow.questions) {
      expect(question.options.length).toBe(4);
      expect(question.stem.length).toBeGreaterThan(0);
      flow.answer(0);
      flow.next();
    }
    await flow.submit();
    expect(flow.phase).toBe("done");
    const result = flow.result!;
    expect(result.score_fraction).toBeGreaterThanOrEqual(0);
    expect(result.score_fraction).toBeLessThanOrEqual(1);
    expect(result.quote.text.length).toBeGreaterThan(0);
    expect(renderResult(result)).toContain(result.quote.text);
  });

  it("shows grounded and fallback badges from real retrieval", async () => {
    const panel = new ChatPanel(api);
    await panel.send(ANXIETY_PATTERN);
    expect(panel.transcript.at(-1)?.badge).toBe("grounded");
    expect(panel.transcript.at(-1)?.text.length).toBeGreaterThan(0);

    await panel.send("purple elephant spreadsheet volcano umbrella sandwich");
    expect(panel.transcript.at(-1)?.badge).toBe("fallback");
  });

  it("builds and renders a roadmap spanning the requested timeline", async () => {
    const topics = ["loops", "functions", "recursion", "testing"];
    const roadmap = await api.roadmap(4, topics, "python");
    expect(roadmap.milestones.length).toBeGreaterThan(0);
    const covered = roadmap.milestones.flatMap((m) => m.topics).sort();
    expect(covered).toEqual([...topics].sort());
    expect(Math.min(...roadmap.milestones.map((m) => m.start_week))).toBe(1);
    expect(Math.max(...roadmap.milestones.map((m) => m.end_week))).toBeLessThanOrEqual(4);

    const html = renderRoadmap(roadmap);
    expect(html.match(/class="milestone"/g)?.length).toBe(roadmap.milestones.length);
    expect(html).toContain("Week");
  });

  it("serves the same tip on dashboard reloads within a day", async () => {
    const first = await api.tip();
    const second = await api.tip();
    expect(second).toEqual(first);
    expect(first.text.length).toBeGreaterThan(0);

    const progress = await api.progress();
    expect(progress.points).toBeGreaterThanOrEqual(0);
    const html = renderDashboard({ tip: first, progress });
    expect(html).toContain(first.text);
    expect(html).toContain(`Streak: ${progress.streak_days} days`);
  });
});
