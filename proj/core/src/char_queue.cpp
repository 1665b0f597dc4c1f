#include "grammarforge/char_queue.hpp"

#include <algorithm>

namespace grammarforge {

std::string_view to_string(QueueEventKind k) noexcept {
  switch (k) {
    case QueueEventKind::Lex: return "lex";
    case QueueEventKind::Consume: return "consume";
    case QueueEventKind::Commit: return "commit";
    case QueueEventKind::Reset: return "reset";
    case QueueEventKind::Mark: return "mark";
    case QueueEventKind::Rewind: return "rewind";
    case QueueEventKind::Release: return "release";
  }
  return "?";
}

CharQueue::CharQueue(std::string buffer) : buffer_(std::move(buffer)) {}

void CharQueue::log(QueueEventKind kind, std::size_t from, std::size_t to) {
  if (logging_) events_.push_back({kind, from, to});
}

void CharQueue::note_lexed(std::size_t from, std::size_t to) {
  frontier_ = std::max(frontier_, to);
  highWater_ = std::max(highWater_, to);
  log(QueueEventKind::Lex, from, to);
}

void CharQueue::consume(const Token& token) {
  if (token.start < cursor_ || token.end < token.start || token.end > buffer_.size()) {
    throw Error(ErrorCode::ConsumeBehindCommit,
                "token at " + std::to_string(token.start) + " lies behind the queue position " + std::to_string(cursor_),
                locate(buffer_, token.start));
  }
  log(QueueEventKind::Consume, token.start, token.end);
  cursor_ = token.end;
  if (marks_.empty()) {
    committed_ = cursor_;
    log(QueueEventKind::Commit, committed_, committed_);
  }
}

void CharQueue::mark() {
  marks_.push_back(cursor_);
  log(QueueEventKind::Mark, cursor_, cursor_);
}

void CharQueue::rewind() {
  log(QueueEventKind::Rewind, cursor_, marks_.back());
  cursor_ = marks_.back();
  marks_.pop_back();
}

void CharQueue::release() {
  log(QueueEventKind::Release, marks_.back(), cursor_);
  marks_.pop_back();
  if (marks_.empty() && cursor_ != committed_) {
    committed_ = cursor_;
    log(QueueEventKind::Commit, committed_, committed_);
  }
}

std::size_t CharQueue::reset_for_embedding() {
  if (!marks_.empty()) {
    throw Error(ErrorCode::EmbeddingInSpeculation, "cannot reset the shared queue while speculating",
                locate(buffer_, cursor_));
  }
  log(QueueEventKind::Reset, frontier_, committed_);
  frontier_ = committed_;
  return committed_;
}

}  // namespace grammarforge
