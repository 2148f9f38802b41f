import { ApiClient, ApiError } from "./api";
import { ChatPanel } from "./chat";
import { loadDashboard } from "./dashboard";
import { QuizFlow } from "./quiz";
import { parseTopics, validateRoadmapInput } from "./roadmap";
import {
  renderDashboard,
  renderQuestion,
  renderResult,
  renderRoadmap,
  renderTranscript,
} from "./render";

type View = "dashboard" | "quiz" | "chat" | "roadmap";

const api = new ApiClient("");
const quiz = new QuizFlow(api);
const chat = new ChatPanel(api);

let view: View = "dashboard";
let roadmapBusy = false;

const $ = <T extends HTMLElement>(selector: string) =>
  document.querySelector(selector) as T;

function show(message: string, selector = "#status") {
  $(selector).textContent = message;
}

function requireLogin(err: unknown): boolean {
  if (err instanceof ApiError && err.status === 401) {
    $("#login").classList.remove("hidden");
    $("#app").classList.add("hidden");
    show("session expired, please log in again", "#login-status");
    return true;
  }
  return false;
}

function switchView(next: View) {
  view = next;
  for (const name of ["dashboard", "quiz", "chat", "roadmap"] as View[]) {
    $(`#view-${name}`).classList.toggle("hidden", name !== view);
  }
  if (view === "dashboard") void refreshDashboard();
}

async function refreshDashboard() {
  try {
    $("#dashboard-body").innerHTML = renderDashboard(await loadDashboard(api));
  } catch (err) {
    if (!requireLogin(err)) show("could not load dashboard");
  }
}

function paintQuiz() {
  const body = $("#quiz-body");
  switch (quiz.phase) {
    case "active": {
      const q = quiz.currentQuestion!;
      body.innerHTML = renderQuestion(
        q,
        quiz.current,
        quiz.questions.length,
        quiz.answers[q.id],
      );
      body.querySelectorAll<HTMLInputElement>("input[name=option]").forEach((input) =>
        input.addEventListener("change", () => {
          quiz.answer(Number(input.value));
          paintQuiz();
        }),
      );
      ($("#quiz-submit") as HTMLButtonElement).disabled = !quiz.allAnswered;
      break;
    }
    case "done":
      body.innerHTML = renderResult(quiz.result!);
      break;
    case "empty":
      body.innerHTML = "<p>No questions available for that topic yet.</p>";
      break;
    case "error":
      body.innerHTML = `<div class="banner">${quiz.errorMessage}</div>`;
      break;
    case "auth-expired":
      requireLogin(new ApiError(401, quiz.errorMessage));
      break;
    default:
      body.innerHTML = "<p>Loading…</p>";
  }
}

function wire() {
  $("#login-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    const username = ($("#login-user") as HTMLInputElement).value;
    const password = ($("#login-pass") as HTMLInputElement).value;
    try {
      await api.login(username, password);
    } catch (err) {
      if (err instanceof ApiError && err.status === 401) {
        try {
          await api.register(username, password);
          await api.login(username, password);
        } catch {
          show("login failed", "#login-status");
          return;
        }
      } else {
        show("login failed", "#login-status");
        return;
      }
    }
    $("#login").classList.add("hidden");
    $("#app").classList.remove("hidden");
    quiz.resume();
    switchView(quiz.session && quiz.result === null ? "quiz" : "dashboard");
    if (view === "quiz") paintQuiz();
  });

  document.querySelectorAll<HTMLButtonElement>("nav button").forEach((button) =>
    button.addEventListener("click", () => switchView(button.dataset.view as View)),
  );

  $("#quiz-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    const topic = ($("#quiz-topic") as HTMLInputElement).value;
    const difficulty = ($("#quiz-difficulty") as HTMLSelectElement).value;
    const mode = ($("#quiz-mode") as HTMLSelectElement).value as "static" | "dynamic";
    const count = Number(($("#quiz-count") as HTMLInputElement).value);
    paintQuiz();
    await quiz.start(topic, difficulty, count, mode);
    paintQuiz();
  });

  $("#quiz-next").addEventListener("click", () => {
    quiz.next();
    paintQuiz();
  });
  $("#quiz-prev").addEventListener("click", () => {
    quiz.previous();
    paintQuiz();
  });
  $("#quiz-submit").addEventListener("click", async () => {
    await quiz.submit();
    paintQuiz();
  });

  $("#chat-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    const input = $("#chat-input") as HTMLInputElement;
    const pending = chat.send(input.value);
    input.value = "";
    $("#chat-body").innerHTML = renderTranscript(chat.transcript, chat.banner);
    await pending;
    if (chat.banner && requireLogin(new ApiError(401, chat.banner))) return;
    $("#chat-body").innerHTML = renderTranscript(chat.transcript, chat.banner);
  });

  $("#roadmap-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    if (roadmapBusy) return;
    const weeks = Number(($("#roadmap-weeks") as HTMLInputElement).value);
    const topics = parseTopics(($("#roadmap-topics") as HTMLInputElement).value);
    const language = ($("#roadmap-language") as HTMLInputElement).value || "python";
    const problem = validateRoadmapInput(weeks, topics);
    if (problem) {
      $("#roadmap-body").innerHTML = `<div class="banner">${problem}</div>`;
      return;
    }
    roadmapBusy = true;
    try {
      $("#roadmap-body").innerHTML = renderRoadmap(await api.roadmap(weeks, topics, language));
    } catch (err) {
      if (!requireLogin(err)) {
        $("#roadmap-body").innerHTML = `<div class="banner">could not build a roadmap</div>`;
      }
    } finally {
      roadmapBusy = false;
    }
  });
}

document.addEventListener("DOMContentLoaded", wire);
