#include "pulsemine/entitykb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pulsemine/error.hpp"

namespace pulsemine {

using nlohmann::json;

Entity make_entity(std::string id, std::string name, const std::vector<std::string>& raw_forms,
                   const std::map<std::string, double>& raw_profile) {
  Entity e{std::move(id), std::move(name), {}, {}};
  for (const auto& raw : raw_forms) {
    TokenSeq form = normalize_surfaces(raw);
    if (form.empty()) {
      throw ConfigError("entity '" + e.id + "': surface form '" + raw + "' is empty");
    }
    if (std::find(e.surface_forms.begin(), e.surface_forms.end(), form) ==
        e.surface_forms.end()) {
      e.surface_forms.push_back(std::move(form));
    }
  }
  for (const auto& [key, weight] : raw_profile) {
    const TokenSeq toks = normalize_surfaces(key);
    if (toks.size() != 1) {
      throw ConfigError("entity '" + e.id + "': profile key '" + key +
                        "' must normalize to a single token");
    }
    if (!std::isfinite(weight) || weight < 0.0) {
      throw ConfigError("entity '" + e.id + "': profile weight for '" + key +
                        "' must be finite and >= 0");
    }
    e.profile[toks.front()] += weight;
  }
  return e;
}

KnowledgeBase::KnowledgeBase(std::vector<Entity> entities) : entities_(std::move(entities)) {
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    const Entity& e = entities_[i];
    if (e.id.empty()) throw ConfigError("entity with empty id");
    if (e.surface_forms.empty()) {
      throw ConfigError("entity '" + e.id + "' has no surface forms");
    }
    for (const auto& form : e.surface_forms) {
      if (form.empty()) throw ConfigError("entity '" + e.id + "' has an empty surface form");
    }
    if (!by_id_.emplace(e.id, i).second) {
      throw ConfigError("duplicate entity id '" + e.id + "'");
    }
  }
}

const Entity* KnowledgeBase::find(std::string_view id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &entities_[it->second];
}

KnowledgeBase KnowledgeBase::parse(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    // byte offset -> line number for the message
    const std::size_t upto = std::min<std::size_t>(e.byte, json_text.size());
    const auto line = 1 + std::count(json_text.begin(), json_text.begin() + upto, '\n');
    throw ConfigError("knowledge base: parse error near line " + std::to_string(line) + ": " +
                      e.what());
  }
  std::vector<Entity> entities;
  try {
    for (const auto& item : j.at("entities")) {
      std::map<std::string, double> profile;
      if (item.contains("profile")) profile = item.at("profile").get<std::map<std::string, double>>();
      auto forms = item.at("surface_forms").get<std::vector<std::string>>();
      std::string id = item.at("id").get<std::string>();
      std::string name = item.contains("name") ? item.at("name").get<std::string>() : id;
      entities.push_back(make_entity(std::move(id), std::move(name), forms, profile));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("knowledge base: ") + e.what());
  }
  return KnowledgeBase(std::move(entities));
}

KnowledgeBase KnowledgeBase::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open knowledge base " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

// --- SurfaceFormMatcher ----------------------------------------------------------

SurfaceFormMatcher::SurfaceFormMatcher(const KnowledgeBase& kb) {
  nodes_.emplace_back();
  for (const Entity& e : kb.entities()) {
    for (const TokenSeq& form : e.surface_forms) {
      std::uint32_t node = 0;
      for (const std::string& tok : form) {
        auto it = nodes_[node].children.find(tok);
        if (it == nodes_[node].children.end()) {
          const auto child = static_cast<std::uint32_t>(nodes_.size());
          const std::size_t depth = nodes_[node].depth + 1;
          nodes_[node].children.emplace(tok, child);
          nodes_.emplace_back();
          nodes_.back().depth = depth;
          node = child;
        } else {
          node = it->second;
        }
      }
      auto& ids = nodes_[node].entity_ids;
      if (std::find(ids.begin(), ids.end(), e.id) == ids.end()) ids.push_back(e.id);
    }
  }
  for (Node& n : nodes_) std::sort(n.entity_ids.begin(), n.entity_ids.end());
}

std::optional<SurfaceFormMatcher::Match> SurfaceFormMatcher::longest_at(
    std::span<const std::string> tokens, std::size_t pos) const {
  std::optional<Match> best;
  std::uint32_t node = 0;
  for (std::size_t i = pos; i < tokens.size(); ++i) {
    auto it = nodes_[node].children.find(tokens[i]);
    if (it == nodes_[node].children.end()) break;
    node = it->second;
    if (!nodes_[node].entity_ids.empty()) best = Match{i - pos + 1, &nodes_[node].entity_ids};
  }
  return best;
}

const std::vector<std::string>* SurfaceFormMatcher::lookup(
    std::span<const std::string> form) const {
  if (form.empty()) return nullptr;
  std::uint32_t node = 0;
  for (const auto& tok : form) {
    auto it = nodes_[node].children.find(tok);
    if (it == nodes_[node].children.end()) return nullptr;
    node = it->second;
  }
  return nodes_[node].entity_ids.empty() ? nullptr : &nodes_[node].entity_ids;
}

std::vector<std::size_t> SurfaceFormMatcher::accepting_depths() const {
  std::vector<std::size_t> out;
  for (const Node& n : nodes_) {
    if (!n.entity_ids.empty()) out.push_back(n.depth);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- mentions -----------------------------------------------------------------

std::vector<Mention> detect_mentions(std::span<const std::string> tokens,
                                     const SurfaceFormMatcher& matcher,
                                     std::string_view doc_id) {
  std::vector<Mention> out;
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    auto match = matcher.longest_at(tokens, pos);
    if (!match) {
      ++pos;
      continue;
    }
    Mention m;
    m.doc_id = std::string(doc_id);
    m.start = pos;
    m.end = pos + match->length;
    m.surface.assign(tokens.begin() + static_cast<std::ptrdiff_t>(m.start),
                     tokens.begin() + static_cast<std::ptrdiff_t>(m.end));
    m.candidates = *match->entity_ids;
    out.push_back(std::move(m));
    pos += match->length;
  }
  return out;
}

std::vector<Mention> detect_mentions(const std::vector<Token>& tokens,
                                     const SurfaceFormMatcher& matcher,
                                     std::string_view doc_id) {
  const auto s = surfaces(tokens);
  return detect_mentions(std::span<const std::string>(s), matcher, doc_id);
}

Mention disambiguate(Mention m, std::span<const std::string> context, const KnowledgeBase& kb) {
  if (m.candidates.size() == 1) {
    m.resolved = m.candidates.front();
    m.confidence = 1.0;
    return m;
  }
  std::map<std::string_view, double> counts;
  for (const auto& tok : context) counts[tok] += 1.0;
  double context_norm = 0.0;
  for (const auto& [tok, c] : counts) context_norm += c * c;
  context_norm = std::sqrt(context_norm);

  double best = 0.0, runner_up = 0.0;
  const std::string* winner = nullptr;
  for (const auto& id : m.candidates) {
    const Entity* e = kb.find(id);
    double score = 0.0;
    if (e && context_norm > 0.0) {
      double dot = 0.0, profile_norm = 0.0;
      for (const auto& [tok, w] : e->profile) {
        profile_norm += w * w;
        if (auto it = counts.find(tok); it != counts.end()) dot += it->second * w;
      }
      if (profile_norm > 0.0) score = dot / (context_norm * std::sqrt(profile_norm));
    }
    if (winner == nullptr || score > best) {
      runner_up = winner == nullptr ? runner_up : best;
      best = score;
      winner = &id;
    } else if (score > runner_up) {
      runner_up = score;
    }
  }
  m.resolved.reset();
  m.confidence = 0.0;
  if (winner != nullptr && best > 0.0 && best - runner_up > kDisambiguationTieTolerance * best) {
    m.resolved = *winner;
    m.confidence = std::min(best, 1.0);
  }
  return m;
}

std::vector<Mention> resolve_mentions(std::span<const std::string> tokens,
                                      const SurfaceFormMatcher& matcher,
                                      const KnowledgeBase& kb, std::string_view doc_id) {
  auto mentions = detect_mentions(tokens, matcher, doc_id);
  for (auto& m : mentions) {
    if (m.candidates.size() == 1) {
      m = disambiguate(std::move(m), {}, kb);
      continue;
    }
    std::vector<std::string> context;
    context.reserve(tokens.size() - (m.end - m.start));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i < m.start || i >= m.end) context.push_back(tokens[i]);
    }
    m = disambiguate(std::move(m), context, kb);
  }
  return mentions;
}

bool filter_relevant(const Document& doc, std::string_view entity_id, const KnowledgeBase& kb,
                     const SurfaceFormMatcher& matcher) {
  if (kb.find(entity_id) == nullptr) {
    throw ConfigError("unknown entity '" + std::string(entity_id) + "'");
  }
  const auto tokens = normalize_surfaces(doc.text);
  for (const auto& m : resolve_mentions(tokens, matcher, kb, doc.id)) {
    if (m.resolved && *m.resolved == entity_id) return true;
  }
  return false;
}

}  // namespace pulsemine
