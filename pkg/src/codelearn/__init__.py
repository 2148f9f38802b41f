"""Self-paced code-learning platform: RAG-backed quizzes, grounded chat,
personalized roadmaps, and daily motivational tips over a local vector store."""

__version__ = "0.1.0"
