import { ApiClient, ApiError } from "./api";

export type ChatEntry = {
  role: "user" | "assistant";
  text: string;
  badge?: "grounded" | "fallback";
};

const HISTORY_WINDOW = 6;

/**
 * Chat transcript with a send queue. Messages fired while a request is
 * in flight are queued and dispatched in order, so the transcript never
 * interleaves. The last few turns travel with each request as history.
 */
export class ChatPanel {
  transcript: ChatEntry[] = [];
  banner = "";

  private queue: string[] = [];
  private draining = false;

  constructor(private api: ApiClient) {}

  get busy(): boolean {
    return this.draining;
  }

  /** Empty or whitespace-only input is ignored. */
  send(message: string): Promise<void> {
    const trimmed = message.trim();
    if (!trimmed) return Promise.resolve();
    this.queue.push(trimmed);
    return this.drain();
  }

  private async drain(): Promise<void> {
    if (this.draining) return;
    this.draining = true;
    try {
      while (this.queue.length > 0) {
        const message = this.queue.shift()!;
        const history = this.transcript
          .slice(-HISTORY_WINDOW)
          .map((entry) => ({ role: entry.role, text: entry.text }));
        this.transcript.push({ role: "user", text: message });
        try {
          const reply = await this.api.chat(message, history);
          this.transcript.push({
            role: "assistant",
            text: reply.text,
            badge: reply.grounded ? "grounded" : "fallback",
          });
          this.banner = "";
        } catch (err) {
          this.banner =
            err instanceof ApiError && err.status === 503
              ? "assistant is unavailable, try again shortly"
              : err instanceof Error
                ? err.message
                : "request failed";
        }
      }
    } finally {
      this.draining = false;
    }
  }
}
