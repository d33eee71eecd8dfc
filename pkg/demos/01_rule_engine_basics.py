"""Walk through the rule engine: parse a policy, evaluate it, apply preferences.

Run as: python3 demos/01_rule_engine_basics.py
"""
from pomcp_rules import evaluate, parse_facts, parse_program, prefer, suggested_actions

# A one-rule sampling policy: sample any rock believed valuable with
# probability above 60 percent.
program = parse_program("sample(R) :- guess(R,V), V > 60.\n")

facts = parse_facts("guess(1,50), guess(2,70)")
answer = evaluate(program, facts)
print("facts:     ", sorted(str(a) for a in facts))
print("answer set:", sorted(str(a) for a in answer))

# With two rocks above the threshold, a weak constraint breaks the tie in
# favor of the higher belief value.
program = parse_program(
    "sample(R) :- guess(R,V), V > 60.\n"
    ":~ sample(R), guess(R,V). [-V@1, R, V]\n")
facts = parse_facts("guess(1,70), guess(2,80)")
answer = evaluate(program, facts)
print("candidates:", sorted(str(a) for a in answer if a.predicate == "sample"))
print("preferred: ", sorted(str(a) for a in prefer(program, answer, "sample")))

# suggested_actions wraps evaluate + prefer and filters to the action names
# the planner understands.
suggested = suggested_actions(program, facts, {"sample", "check"})
print("suggested: ", sorted(str(a) for a in suggested))
