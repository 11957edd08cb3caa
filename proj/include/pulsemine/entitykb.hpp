#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pulsemine/document.hpp"
#include "pulsemine/error.hpp"
#include "pulsemine/textnorm.hpp"

namespace pulsemine {

using TokenSeq = std::vector<std::string>;

// A target entity. Surface forms and profile keys are held in normalized
// token form.
struct Entity {
  std::string id;
  std::string name;
  std::vector<TokenSeq> surface_forms;
  std::map<std::string, double> profile;
};

// Normalizes raw surface forms and profile keys through textnorm.
// Throws ConfigError if a form normalizes to nothing, a profile key is not a
// single token, or a weight is negative or non-finite.
Entity make_entity(std::string id, std::string name, const std::vector<std::string>& raw_forms,
                   const std::map<std::string, double>& raw_profile = {});

class KnowledgeBase {
 public:
  // Throws ConfigError on duplicate ids or entities without surface forms.
  explicit KnowledgeBase(std::vector<Entity> entities);

  // {"entities":[{"id","name","surface_forms":[...],"profile":{...}}]}
  static KnowledgeBase parse(std::string_view json_text);
  static KnowledgeBase load(const std::filesystem::path& path);

  const std::vector<Entity>& entities() const { return entities_; }
  const Entity* find(std::string_view id) const;

 private:
  std::vector<Entity> entities_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
};

// Prefix tree over token sequences. Accepting nodes carry the sorted ids of
// every entity listing that surface form.
class SurfaceFormMatcher {
 public:
  explicit SurfaceFormMatcher(const KnowledgeBase& kb);

  struct Match {
    std::size_t length = 0;
    const std::vector<std::string>* entity_ids = nullptr;
  };

  // Longest surface form starting at tokens[pos], if any.
  std::optional<Match> longest_at(std::span<const std::string> tokens, std::size_t pos) const;

  // Entity ids for an exact surface form, or nullptr if not accepted.
  const std::vector<std::string>* lookup(std::span<const std::string> form) const;
  bool accepts(std::span<const std::string> form) const { return lookup(form) != nullptr; }

  std::size_t node_count() const { return nodes_.size(); }
  // Depths of accepting nodes, ascending; used to inspect tree shape.
  std::vector<std::size_t> accepting_depths() const;

 private:
  struct Node {
    std::map<std::string, std::uint32_t, std::less<>> children;
    std::vector<std::string> entity_ids;
    std::size_t depth = 0;
  };
  std::vector<Node> nodes_;
};

struct Mention {
  std::string doc_id;
  std::size_t start = 0;  // token span [start, end)
  std::size_t end = 0;
  TokenSeq surface;
  std::vector<std::string> candidates;  // sorted, nonempty
  std::optional<std::string> resolved;
  double confidence = 0.0;
};

// Leftmost-longest, non-overlapping scan.
std::vector<Mention> detect_mentions(std::span<const std::string> tokens,
                                     const SurfaceFormMatcher& matcher,
                                     std::string_view doc_id = {});
std::vector<Mention> detect_mentions(const std::vector<Token>& tokens,
                                     const SurfaceFormMatcher& matcher,
                                     std::string_view doc_id = {});

// Resolves a mention by cosine similarity between the context token counts
// and each candidate's profile. The winner must score > 0 and strictly beat
// the runner-up; otherwise the mention stays unresolved with confidence 0.
// Scores closer than this (relative) count as a tie, so rescaling a profile
// cannot flip an exact tie through rounding.
inline constexpr double kDisambiguationTieTolerance = 1e-12;

Mention disambiguate(Mention m, std::span<const std::string> context, const KnowledgeBase& kb);

// Detects and disambiguates every mention; the context of each mention is
// the full token sequence minus its span.
std::vector<Mention> resolve_mentions(std::span<const std::string> tokens,
                                      const SurfaceFormMatcher& matcher,
                                      const KnowledgeBase& kb, std::string_view doc_id = {});

// True iff some mention of doc resolves to entity_id. Throws ConfigError for
// an unknown entity id.
bool filter_relevant(const Document& doc, std::string_view entity_id, const KnowledgeBase& kb,
                     const SurfaceFormMatcher& matcher);

}  // namespace pulsemine
