// Analyze one essay read from stdin and print the feedback text.
//
//   ./build/samples/analyze_text < tests/fixtures/essay_en.txt

#include <iostream>
#include <iterator>
#include <string>
#include <variant>

#include "reflect/service/engine.hpp"

int main() {
    using namespace reflect;
    const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};

    service::ServiceConfig config;
    auto engine = service::Engine::load(config);

    service::AnalyzeRequest request;
    request.text = text;
    request.seed = 1;
    try {
        const auto outcome = engine->handle_analyze(request);
        if (const auto* gate = std::get_if<service::GateResult>(&outcome)) {
            std::cout << "revision requested:";
            for (const auto& r : gate->reasons) std::cout << ' ' << service::to_string(r.kind);
            std::cout << '\n';
            return 1;
        }
        const auto& f = std::get<FeedbackResponse>(outcome);
        std::cout << "level " << to_int(f.level) << ", language " << f.language.tag() << "\n\n" << f.text << '\n';
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 0;
}
