export type PublicQuestion = {
  id: string;
  stem: string;
  options: string[];
};

export type QuizSession = {
  session_id: string;
  mode: "static" | "dynamic";
  topic: string;
  difficulty: string;
  started_at: string;
  questions: PublicQuestion[];
};

export type QuizResult = {
  session_id: string;
  score_fraction: number;
  duration_seconds: number;
  quote: { category: string; text: string };
  points: number;
  streak_days: number;
};

export type ChatResponse = {
  text: string;
  source_tags: string[];
  grounded: boolean;
};

export type Milestone = {
  title: string;
  topics: string[];
  start_week: number;
  end_week: number;
  lessons: string[];
};

export type Roadmap = {
  user_id: string;
  timeline_weeks: number;
  language: string;
  milestones: Milestone[];
};

export type Tip = {
  user_id: string;
  date: string;
  text: string;
  derived_from: string;
};

export type HistoryEntry = {
  topic: string;
  difficulty: string;
  mode: string;
  score_fraction: number;
  duration_seconds: number;
  date: string;
};

export type Progress = {
  user_id: string;
  history: HistoryEntry[];
  points: number;
  streak_days: number;
  last_active_date: string | null;
  averages: Record<string, Record<string, number>>;
};

export type LoginResponse = {
  token: string;
  user_id: string;
  expires_at: string;
};
