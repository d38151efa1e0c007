#include "eragent/reader.hpp"

#include <sstream>

#include "eragent/errors.hpp"
#include "eragent/templates.hpp"
#include "eragent/util.hpp"

namespace eragent {

std::string Reader::assemble_prompt(const ReaderInput& input) {
    std::string context_section;
    if (!input.knowledge.backoff) {
        std::ostringstream ctx;
        ctx << "\n\nContext:\n";
        int n = 0;
        for (const auto& chunk : input.knowledge.kept) {
            ctx << "[" << ++n << "] " << chunk.text << "\n";
        }
        context_section = ctx.str();
        if (!context_section.empty() && context_section.back() == '\n') {
            context_section.pop_back();
        }
    } else {
        context_section = "\nNo external context is available; answer from your own knowledge.";
    }

    if (input.style == ReaderStyle::personalized) {
        if (!input.profile) throw ReaderFailed("personalized style requires a profile");
        std::string profile_section = input.profile->serialize();
        if (profile_section.empty()) profile_section = "(no profile information yet)";
        return templates::reader_personalized().render({{"question", input.rewritten},
                                                        {"context_section", context_section},
                                                        {"profile_section", profile_section}});
    }
    return templates::reader_basic().render(
        {{"question", input.rewritten}, {"context_section", context_section}});
}

AnswerRecord Reader::answer(const ReaderInput& input) const {
    const std::string prompt = assemble_prompt(input);
    AnswerRecord record;
    record.style = input.style;
    try {
        record.text = util::trim(gateway_.complete(prompt, "read"));
    } catch (const Error& e) {
        throw ReaderFailed(e.what());
    }
    for (const auto& chunk : input.knowledge.kept) {
        record.used_knowledge_ids.push_back(chunk.id);
    }
    return record;
}

}  // namespace eragent
