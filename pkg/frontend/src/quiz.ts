import { ApiClient, ApiError } from "./api";
import type { PublicQuestion, QuizResult, QuizSession } from "./types";

export type QuizPhase =
  | "idle"
  | "loading"
  | "empty"
  | "active"
  | "submitting"
  | "done"
  | "error"
  | "auth-expired";

/**
 * State machine for one quiz attempt: load a session, step through the
 * questions one at a time, submit all answers at once. Answers live in
 * memory and survive transient failures and auth expiry, so a learner
 * who logs back in can resubmit without redoing the quiz.
 */
export class QuizFlow {
  phase: QuizPhase = "idle";
  session: QuizSession | null = null;
  answers: Record<string, number> = {};
  current = 0;
  result: QuizResult | null = null;
  errorMessage = "";

  constructor(private api: ApiClient) {}

  async start(
    topic: string,
    difficulty: string,
    count: number,
    mode: "static" | "dynamic",
  ): Promise<void> {
    this.phase = "loading";
    this.result = null;
    this.errorMessage = "";
    try {
      this.session =
        mode === "dynamic"
          ? await this.api.dynamicQuiz(topic, difficulty, count)
          : await this.api.staticQuiz(topic, difficulty, count);
    } catch (err) {
      this.session = null;
      this.fail(err);
      return;
    }
    this.answers = {};
    this.current = 0;
    this.phase = this.session.questions.length === 0 ? "empty" : "active";
  }

  get questions(): PublicQuestion[] {
    return this.session?.questions ?? [];
  }

  get currentQuestion(): PublicQuestion | null {
    return this.questions[this.current] ?? null;
  }

  get allAnswered(): boolean {
    return (
      this.questions.length > 0 && this.questions.every((q) => q.id in this.answers)
    );
  }

  answer(optionIndex: number): void {
    const question = this.currentQuestion;
    if (this.phase !== "active" || !question) return;
    if (optionIndex < 0 || optionIndex >= question.options.length) return;
    this.answers[question.id] = optionIndex;
  }

  next(): void {
    if (this.current < this.questions.length - 1) this.current += 1;
  }

  previous(): void {
    if (this.current > 0) this.current -= 1;
  }

  async submit(): Promise<void> {
    if (!this.session || !this.allAnswered) return;
    this.phase = "submitting";
    try {
      this.result = await this.api.submitQuiz(this.session.session_id, this.answers);
      this.phase = "done";
    } catch (err) {
      this.fail(err);
    }
  }

  /** Back to answering after re-login or a transient failure. */
  resume(): void {
    if (this.session && this.result === null) this.phase = "active";
  }

  private fail(err: unknown): void {
    if (err instanceof ApiError && err.status === 401) {
      this.phase = "auth-expired";
      this.errorMessage = "session expired, please log in again";
      return;
    }
    this.phase = "error";
    this.errorMessage =
      err instanceof ApiError && err.status === 503
        ? "question generator is unavailable, try again shortly"
        : err instanceof Error
          ? err.message
          : "request failed";
  }
}
