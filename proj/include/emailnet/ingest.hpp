#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emailnet {

using Timestamp = std::int64_t;  // seconds since epoch, UTC

enum class Label { ham, spam, unknown };
enum class Status { accepted, rejected, incomplete };
enum class Verb { mail_from, rcpt_to, data, data_end };

std::string_view to_string(Label l);
std::string_view to_string(Status s);
std::optional<Label> parse_label(std::string_view s);
std::optional<Status> parse_status(std::string_view s);

struct SmtpCommand {
  Verb verb;
  std::string argument;
  bool operator==(const SmtpCommand&) const = default;
};

struct SmtpSession {
  std::string session_id;
  Timestamp timestamp = 0;  // first record of the session
  std::vector<SmtpCommand> commands;
  Label label = Label::unknown;
};

struct EmailEvent {
  Timestamp timestamp = 0;
  std::string sender;
  std::vector<std::string> recipients;
  Status status = Status::accepted;
  Label label = Label::ham;
  bool operator==(const EmailEvent&) const = default;
};

// One sender -> recipient delivery attempt.
struct Transmission {
  std::string sender;
  std::string recipient;
  Timestamp timestamp = 0;
  Status status = Status::accepted;
  Label label = Label::ham;
  bool operator==(const Transmission&) const = default;
};

struct SessionLogResult {
  std::vector<SmtpSession> sessions;
  // records = session groups + malformed lines; blank lines are not records.
  std::size_t records = 0;
  std::size_t malformed = 0;
};

// Tab-separated `<unix_ts> <session_id> <verb> <argument>` records. Lines
// that do not parse, carry an unknown verb, or put RCPT_TO before any
// MAIL_FROM are counted as malformed and skipped. Throws IoError when the
// stream is unreadable.
SessionLogResult parse_session_log(std::istream& in);

struct EventLogResult {
  std::vector<EmailEvent> events;
  std::size_t records = 0;
  std::size_t malformed = 0;
  std::size_t null_sender = 0;
};

// Pre-classified `<unix_ts> <sender> <rcpt[,rcpt...]> <status> <label>` lines.
// Events violating the status/label invariants count as malformed; events
// with an empty sender are dropped and counted separately.
EventLogResult parse_event_log(std::istream& in);

void write_event(std::ostream& out, const EmailEvent& e);
void write_event_log(std::ostream& out, const std::vector<EmailEvent>& events);

struct ClassifyStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t incomplete = 0;
  std::size_t null_sender = 0;
  std::size_t unlabeled = 0;  // reached DATA_END without a ham/spam label

  ClassifyStats& operator+=(const ClassifyStats& o);
};

// Strips angle brackets, ESMTP parameters and surrounding whitespace from a
// MAIL FROM / RCPT TO argument. `<>` yields the empty string.
std::string extract_address(std::string_view argument);

// Splits a session into its MAIL_FROM..DATA_END cycles. Completed cycles are
// accepted with the session label; cycles with recipients but no DATA_END are
// rejected; cycles without a sender or without recipients are incomplete and
// emit nothing. Null-sender cycles emit nothing.
std::vector<EmailEvent> classify_session(const SmtpSession& s,
                                         ClassifyStats* stats = nullptr);

std::vector<Transmission> expand_recipients(const EmailEvent& e);

}  // namespace emailnet
