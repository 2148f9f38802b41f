import type {
  ChatResponse,
  LoginResponse,
  Progress,
  QuizResult,
  QuizSession,
  Roadmap,
  Tip,
} from "./types";

export class ApiError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/**
 * Thin typed wrapper over the service's JSON endpoints. Holds the auth
 * token in memory only; any authenticated call made without one fails
 * fast with a 401 ApiError instead of hitting the network.
 */
export class ApiClient {
  token: string | null = null;
  userId: string | null = null;

  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    requiresAuth = true,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (requiresAuth) {
      if (!this.token) throw new ApiError(401, "not logged in");
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    let payload: unknown = {};
    try {
      payload = await response.json();
    } catch {
      // non-JSON body; the status code is all we have
    }
    if (!response.ok) {
      const message =
        (payload as { error?: string }).error ?? `request failed (${response.status})`;
      throw new ApiError(response.status, message);
    }
    return payload as T;
  }

  async register(username: string, password: string): Promise<void> {
    await this.request("POST", "/api/auth/register", { username, password }, false);
  }

  async login(username: string, password: string): Promise<LoginResponse> {
    const record = await this.request<LoginResponse>(
      "POST",
      "/api/auth/login",
      { username, password },
      false,
    );
    this.token = record.token;
    this.userId = record.user_id;
    return record;
  }

  logout(): void {
    this.token = null;
    this.userId = null;
  }

  staticQuiz(topic: string, difficulty: string, count: number): Promise<QuizSession> {
    const query = new URLSearchParams({
      topic,
      difficulty,
      count: String(count),
    });
    return this.request("GET", `/api/quiz/static?${query}`);
  }

  dynamicQuiz(topic: string, difficulty: string, count: number): Promise<QuizSession> {
    return this.request("POST", "/api/quiz/dynamic", { topic, difficulty, count });
  }

  submitQuiz(sessionId: string, answers: Record<string, number>): Promise<QuizResult> {
    return this.request("POST", `/api/quiz/${sessionId}/submit`, { answers });
  }

  explain(questionId: string): Promise<{ question_id: string; explanation: string }> {
    return this.request("GET", `/api/questions/${questionId}/explain`);
  }

  chat(message: string, history: { role: string; text: string }[]): Promise<ChatResponse> {
    return this.request("POST", "/api/chat", { message, history });
  }

  roadmap(timelineWeeks: number, topics: string[], language: string): Promise<Roadmap> {
    return this.request("POST", "/api/roadmap", {
      timeline_weeks: timelineWeeks,
      topics,
      language,
    });
  }

  tip(): Promise<Tip> {
    return this.request("GET", "/api/tip");
  }

  progress(): Promise<Progress> {
    return this.request("GET", "/api/progress");
  }
}
