// SPDX-License-Identifier: Apache-2.0
#include "cop/prompts.hpp"

#include "cop/text.hpp"

namespace cop::prompts {

namespace {

constexpr std::string_view kHeadingOpen = "<<< ";
constexpr std::string_view kHeadingClose = " >>>";

constexpr PromptTemplate kRequirementExtraction{
    "requirement_analysis.extract",
    R"(You are in the Requirement Analysis phase of a geospatial code generation workflow.

Task
- Read the user requirements and extract the 8 key elements listed below.
- Copy what the user stated as faithfully as possible. If an element is not mentioned, leave it as an empty string; do not guess.
- Your output is stored as the standardized User Requirements Document in the shared information pool.

Elements
- Platform: target cloud platform or local toolkit
- Programming_Language: language the code is written in
- Analysis_Goal: the specific analysis or task objective
- Spatial_Extent: geographic area or coordinates
- Temporal_Extent: time range of the analysis
- Data_Source_and_Format: data source and its format
- Analysis_Methodology: analysis technique or method
- Output_Format: type and format of the output

Completeness rules
- Required: Platform, Programming_Language, Analysis_Goal, Data_Source_and_Format, Output_Format.
- Conditional: Spatial_Extent, Temporal_Extent (needed only when the goal depends on them).
- Optional: Analysis_Methodology.

Output format
Reply with JSON only:
{
  "document_type": "User Requirements Document",
  "requirements": {
    "Platform": "",
    "Programming_Language": "",
    "Analysis_Goal": "",
    "Spatial_Extent": "",
    "Temporal_Extent": "",
    "Data_Source_and_Format": "",
    "Analysis_Methodology": "",
    "Output_Format": ""
  }
})",
    false};

constexpr PromptTemplate kConditionalNeed{
    "requirement_analysis.conditional_need",
    R"(You are in the Requirement Analysis phase of a geospatial code generation workflow.

Decide whether the analysis goal below needs a spatial extent (a geographic area) and whether it needs a temporal extent (a date, year or time range).

Reply with exactly two words separated by a slash, spatial first: yes/yes, yes/no, no/yes or no/no.)",
    false};

constexpr PromptTemplate kMethodologyInference{
    "requirement_analysis.infer_methodology",
    R"(You are in the Requirement Analysis phase of a geospatial code generation workflow.

The user did not state an analysis methodology. Based on the requirements below, name the most suitable analysis technique or method in a short phrase (for example "NDVI calculation" or "Image clipping").

Reply with the phrase only.)",
    false};

constexpr PromptTemplate kAlgorithmDesignTemplate{
    "algorithm_design",
    R"(You are in the Algorithm Design phase of a geospatial code generation workflow.

Task
- Take the User Requirements Document and turn it into a multi-step algorithmic workflow.
- Divide and conquer: split the work into modules that each do one thing, have a clear input and output, and compose cleanly with the other modules.
- Your output is stored as the Algorithm Design Document in the shared information pool.

For every module provide
- Module_Sequence: position in the workflow, starting at 1
- Module_Name: short name
- Module_Description: responsibility and purpose of the module
- Input: what the module consumes
- Output: what the module produces
- Implementation_Details: key logic and steps

Output format
Reply with JSON only:
{
  "Document_Type": "Algorithm Design Document",
  "Algorithm": [
    {
      "Module_Sequence": 1,
      "Module_Name": "",
      "Module_Description": "",
      "Input": "",
      "Output": "",
      "Implementation_Details": ""
    }
  ]
})",
    false};

constexpr PromptTemplate kCodeImplementation{
    "code_implementation",
    R"(You are in the Code Implementation phase of a geospatial code generation workflow.

Task
- Write complete, runnable code that implements every module of the Algorithm Design Document, in order.
- Use exactly the platform and programming language given in the target section.
- When a Knowledge Base section is present, prefer the function signatures and dataset access paths it lists over anything recalled from memory.
- Do not invent functions, datasets or parameters.

Output format
Reply with the code only, in a single fenced code block.)",
    true};

constexpr PromptTemplate kCodeDebugging{
    "code_debugging",
    R"(You are in the Code Debugging phase of a geospatial code generation workflow.

The user ran the current code and reported the result below.
- If the code did not run, the feedback holds the console error message. Fix the cause of the error.
- If the code ran but the result was wrong, the feedback describes the unexpected output. Correct the logic so the result matches the requirements.
Keep everything that already works unchanged.

Output format
Reply with the complete corrected code only, in a single fenced code block.)",
    true};

constexpr PromptTemplate kCodeAnnotation{
    "code_annotation",
    R"(You are in the Code Annotation phase of a geospatial code generation workflow.

Task
- Add a header at the very top of the script, written as comment lines:
    Created: <creation time from the metadata section>
    Platform: <platform from the metadata section>
    Description: <one sentence on what the code does>
- Add at least one concise comment for every module of the Algorithm Design Document, placed where that module is implemented.
- Use the comment syntax of the programming language given in the metadata section.
- Existing comments may be reworded so they stay consistent with the code.
- Do not change, add or remove any executable statement.

Output format
Reply with the complete annotated code only, in a single fenced code block.)",
    true};

}  // namespace

const PromptTemplate& requirement_extraction() { return kRequirementExtraction; }
const PromptTemplate& conditional_need() { return kConditionalNeed; }
const PromptTemplate& methodology_inference() { return kMethodologyInference; }
const PromptTemplate& algorithm_design() { return kAlgorithmDesignTemplate; }
const PromptTemplate& code_implementation() { return kCodeImplementation; }
const PromptTemplate& code_debugging() { return kCodeDebugging; }
const PromptTemplate& code_annotation() { return kCodeAnnotation; }

std::vector<const PromptTemplate*> catalog() {
  return {&kRequirementExtraction, &kConditionalNeed, &kMethodologyInference, &kAlgorithmDesignTemplate,
          &kCodeImplementation,    &kCodeDebugging,   &kCodeAnnotation};
}

std::string render_sections(const std::vector<Section>& sections) {
  std::string out;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (i) out += "\n\n";
    out += kHeadingOpen;
    out += sections[i].title;
    out += kHeadingClose;
    out += '\n';
    out += sections[i].body;
  }
  return out;
}

std::vector<Section> parse_sections(std::string_view message) {
  std::vector<Section> out;
  for (auto& line : text::split_lines(message)) {
    if (line.size() >= kHeadingOpen.size() + kHeadingClose.size() && line.rfind(kHeadingOpen, 0) == 0 &&
        line.compare(line.size() - kHeadingClose.size(), kHeadingClose.size(), kHeadingClose) == 0) {
      out.push_back({line.substr(kHeadingOpen.size(), line.size() - kHeadingOpen.size() - kHeadingClose.size()), {}});
      continue;
    }
    if (out.empty()) continue;
    auto& body = out.back().body;
    if (!body.empty() || !line.empty()) {
      if (!body.empty()) body += '\n';
      body += line;
    }
  }
  // Separator blank lines between sections end up as trailing newlines.
  for (auto& s : out) {
    while (!s.body.empty() && s.body.back() == '\n') s.body.pop_back();
  }
  return out;
}

}  // namespace cop::prompts
