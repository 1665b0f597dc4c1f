#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "grammarforge/lexer.hpp"

namespace grammarforge {

enum class QueueEventKind { Lex, Consume, Commit, Reset, Mark, Rewind, Release };

std::string_view to_string(QueueEventKind k) noexcept;

struct QueueEvent {
  QueueEventKind kind;
  std::size_t from = 0;
  std::size_t to = 0;

  bool operator==(const QueueEvent&) const = default;
};

/// The input shared by every lexer of a parse session. Nothing is physically
/// dropped: "removing" consumed characters means moving `committed`.
///
/// While a mark is active, consumption is provisional: it moves the cursor
/// but not `committed`. Releasing the outermost mark commits the cursor.
class CharQueue {
 public:
  explicit CharQueue(std::string buffer);

  std::string_view buffer() const { return buffer_; }
  std::size_t size() const { return buffer_.size(); }

  std::size_t committed() const { return committed_; }
  /// Next unconsumed offset including provisional consumption.
  std::size_t cursor() const { return cursor_; }
  /// Furthest offset any lexer read up to since the last reset.
  std::size_t frontier() const { return frontier_; }
  /// Furthest offset ever lexed; never reset.
  std::size_t high_water() const { return highWater_; }
  bool speculating() const { return !marks_.empty(); }
  std::size_t depth() const { return marks_.size(); }

  void note_lexed(std::size_t from, std::size_t to);

  /// Throws Error{ConsumeBehindCommit} if the token starts before the cursor.
  void consume(const Token& token);

  void mark();
  /// Restores the cursor of the innermost mark and drops it.
  void rewind();
  /// Drops the innermost mark, keeping consumption.
  void release();

  /// Discards all lookahead past `committed` and returns it. Only valid when
  /// not speculating.
  std::size_t reset_for_embedding();

  void set_logging(bool on) { logging_ = on; }
  const std::vector<QueueEvent>& events() const { return events_; }

 private:
  void log(QueueEventKind kind, std::size_t from, std::size_t to);

  std::string buffer_;
  std::size_t committed_ = 0;
  std::size_t cursor_ = 0;
  std::size_t frontier_ = 0;
  std::size_t highWater_ = 0;
  std::vector<std::size_t> marks_;
  bool logging_ = false;
  std::vector<QueueEvent> events_;
};

}  // namespace grammarforge
