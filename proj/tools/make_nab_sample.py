#!/usr/bin/env python3
"""Builds the checked-in narrative-abstraction sample file.

Emits data/nab/nab_sample.jsonl: 5 proverbs x 10 narratives. The first
narrative of each proverb is the published sample row; the other nine are
synthetic items written in the same format (shared context, correct ending
consistent with the proverb, distractor that is locally coherent but ignores
or inverts the proverb's point). Run from the repository root.
"""

import json

ROWS = []


def item(pid, proverb, context, correct, distractor):
    ROWS.append(
        {
            "proverb_id": pid,
            "proverb": proverb,
            "context": context,
            "correct_ending": correct,
            "distractor_ending": distractor,
        }
    )


JAM = "Jam tomorrow"
item("jam_tomorrow", JAM,
     "The man believed his friend when he kept borrowing money from him, telling him "
     "he would pay him tomorrow. Every day he told him he would pay him soon.",
     "He kept giving him money, thinking of the future, but never saw the loans repaid.",
     "He finally got fed up with the constant requests and decided to save all his "
     "money for emergencies.")
item("jam_tomorrow", JAM,
     "The landlord promised his tenants that the heating would be fixed next week. "
     "Each month brought a new excuse and a new promise of repairs just around the corner.",
     "Winter came and went, and the radiators stayed cold despite every assurance.",
     "The repair crew arrived that Friday and fixed every radiator in the building.")
item("jam_tomorrow", JAM,
     "A startup told its engineers that bonuses would come after the next funding "
     "round. Every quarter the goalposts moved, and the round was always almost closed.",
     "Years later the veterans joked that the famous bonus was still scheduled for tomorrow.",
     "When the round finally closed that spring, every engineer received the promised bonus.")
item("jam_tomorrow", JAM,
     "Nan's diner hung a sign reading free pie tomorrow. Regulars who asked about it "
     "were told, with a wink, to come back the next day.",
     "No one ever tasted the free pie, because tomorrow never arrived on the menu.",
     "On her birthday Nan finally handed out free slices to everyone at the counter.")
item("jam_tomorrow", JAM,
     "The council assured the village that the bridge would be rebuilt next season. "
     "Season after season, surveyors came, nodded, and left without laying a stone.",
     "The villagers grew old crossing the long way around, still waiting on next season.",
     "The next spring a construction crew arrived and the bridge reopened by summer.")
item("jam_tomorrow", JAM,
     "Her manager kept hinting that a promotion was imminent, just one more project "
     "away. Each finished project revealed yet another that had to come first.",
     "She eventually realized the promotion lived permanently in the week after this one.",
     "After the audit project wrapped up, the promotion letter landed on her desk.")
item("jam_tomorrow", JAM,
     "The gym advertised that its pool would open to members shortly. Shortly "
     "stretched across notice after notice taped to the locked door.",
     "Members renewed for years on the strength of a pool none of them ever swam in.",
     "The pool finally opened that August and the members swam every morning.")
item("jam_tomorrow", JAM,
     "Dad said we would go fishing at the lake once work calmed down. Work never "
     "calmed; the tackle box gathered dust by the garage door.",
     "I grew up and moved away still waiting for the calm weekend that never came.",
     "One Saturday he shut his laptop, grabbed the tackle box, and we drove to the lake.")
item("jam_tomorrow", JAM,
     "The airline apologized for the delay and promised boarding within the hour. "
     "Every hour, a fresh announcement pushed boarding one more hour away.",
     "Passengers slept on their luggage, fed on promises that always expired at the gate.",
     "True to the announcement, the plane boarded an hour later and took off smoothly.")
item("jam_tomorrow", JAM,
     "The software vendor swore the missing feature was on next month's roadmap. The "
     "roadmap rolled forward every month, feature forever pinned to the horizon.",
     "Customers learned that next month was the one month the calendar never reached.",
     "The update shipped the following month with the feature working exactly as promised.")

POW = "Keep your powder dry"
item("powder_dry", POW,
     "Margo always knew to start any trip with a spare tire, emergency cash, and a "
     "car repair kit. She stayed calm and prepared for any catastrophe.",
     "She was yet to need any of this, but she always figured she'd be best prepared "
     "if catastrophe ever struck.",
     "With all the supplies in her car, Margo felt ready for anything and drove off, "
     "never expecting to encounter issues.")
item("powder_dry", POW,
     "Captain Iris drilled her crew on lifeboat stations every single crossing. The "
     "sea stayed glassy all summer and some sailors grumbled about wasted mornings.",
     "She ran the drills anyway, reasoning that calm seas were the time to ready for storms.",
     "By August she agreed the drills were pointless and let the crew sleep in instead.")
item("powder_dry", POW,
     "Tomas kept his resume polished even though his job felt secure. He saved three "
     "months of wages in an account he never touched.",
     "Nothing had gone wrong yet, but he preferred meeting trouble already packed.",
     "Feeling safe at last, he spent the savings on a long vacation and let the resume lapse.")
item("powder_dry", POW,
     "The clinic restocked its emergency kits every Monday without fail. Months "
     "passed without a single serious incident in the waiting room.",
     "The staff kept counting bandages all the same, so readiness never ran out before luck did.",
     "Eventually the director cut the Monday restock to save money, since nothing ever happened.")
item("powder_dry", POW,
     "Grandma canned vegetables each autumn and stacked firewood to the rafters. Her "
     "neighbors teased her because the winters had been mild for years.",
     "She smiled and kept stacking, saying mild winters were loans the weather would collect.",
     "She decided they were right and sold the firewood before the first frost.")
item("powder_dry", POW,
     "The team kept a tested backup of the database though the servers never failed. "
     "Every Friday someone verified the restore scripts end to end.",
     "The routine felt unnecessary, and that was exactly why they never skipped it.",
     "After a quiet year they retired the backups to free up storage for new features.")
item("powder_dry", POW,
     "Marta carried a sewing kit, plasters, and a torch in her hiking pack. Most "
     "weekends the trail was kind and the kit stayed zipped.",
     "She repacked it each trip regardless, happier to carry readiness than to need it.",
     "To lighten her pack she finally left the kit at home for good.")
item("powder_dry", POW,
     "The theater rehearsed its fire evacuation before every production run. Ushers "
     "could clear the stalls blindfolded, though no alarm had ever rung in earnest.",
     "The director kept the rehearsals on the calendar, trusting practice over luck.",
     "With no fires in living memory, the rehearsals were dropped from the schedule.")
item("powder_dry", POW,
     "Old Mr. Behan oiled the storm shutters each September, hurricane or none. His "
     "garage held bottled water, batteries, and a radio in a labeled crate.",
     "Most years nothing came, and he counted every quiet season as a drill that paid "
     "for itself.",
     "After another calm season he gave the crate away, certain storms had passed him by.")
item("powder_dry", POW,
     "The chess club made its juniors study endgames they might never reach. Week "
     "after week the youngsters drilled positions from games that had not happened.",
     "When asked why, the coach said the sharpened blade waits quietly for its moment.",
     "The juniors convinced the coach to drop the drills and just play casual games.")

LAU = "Laughter is the best medicine"
item("laughter_medicine", LAU,
     "My grandfather was ill and in a somber mood. I read him a funny speech about a "
     "plagiarism scandal, and his eyes lit up with fascination.",
     "The somber mood in the room dissipated like dew as we all wondered loudly, and "
     "mirthfully, how that was possible.",
     "The somber mood in the room dissipated as my grandfather's eyes lit up with "
     "curiosity about the scandal.")
item("laughter_medicine", LAU,
     "The children's ward was quiet after a hard week. A volunteer clown arrived with "
     "a squeaking accordion and a pocketful of terrible puns.",
     "By the second song even the tired nurses were laughing, and the ward felt "
     "lighter than it had in days.",
     "The head nurse asked him to keep the noise down so the new prescriptions could "
     "take effect.")
item("laughter_medicine", LAU,
     "After the layoffs, the office ate lunch in silence. On Friday someone taped a "
     "ridiculous drawing of the photocopier to the fridge.",
     "The first real laugh in weeks went around the room, and shoulders finally came "
     "down from ears.",
     "HR circulated a memo about the drawing and scheduled a formal review of fridge policy.")
item("laughter_medicine", LAU,
     "Grandpa's recovery from hip surgery had stalled, and he barely spoke at dinner. "
     "My sister started retelling the story of his infamous fishing hat.",
     "He laughed until he wheezed, and for the first time that month he asked for seconds.",
     "The surgeon adjusted his medication the next morning and his appetite slowly returned.")
item("laughter_medicine", LAU,
     "The long bus ride home after the lost final had the team staring out windows. "
     "The goalkeeper began impersonating the referee's dramatic whistle.",
     "Laughter rolled down the aisle, and by the last stop the loss weighed half as much.",
     "The coach reviewed the match footage in silence, planning drills for the next season.")
item("laughter_medicine", LAU,
     "Exam week had the dorm stretched thin and snappish. At midnight someone "
     "organized a contest for the worst joke on the corridor.",
     "Ten minutes of helpless giggling did what no energy drink had managed all week.",
     "The resident advisor broke up the gathering so everyone could get a full night of sleep.")
item("laughter_medicine", LAU,
     "The nursing home's rainy afternoon sagged until Mrs. Pell misread the bingo "
     "card aloud. Her mistake turned into a running gag that spread table to table.",
     "The room that had dozed all day was suddenly bright with laughter and shouted numbers.",
     "An aide corrected the card quietly and the game continued in orderly fashion.")
item("laughter_medicine", LAU,
     "Dad came home gray after the worst shift of his year. My brother greeted him "
     "wearing the dog's cone collar like a space helmet.",
     "Dad laughed so hard he had to sit on the stairs, and the shift seemed to wash "
     "off him.",
     "Dad went straight to bed early, hoping a long sleep would cure the day.")
item("laughter_medicine", LAU,
     "The waiting room before the biopsy results was thick with dread. A toddler "
     "marched through wearing one shoe and announcing he was a pirate.",
     "Strangers caught each other grinning, and the dread loosened enough to breathe around.",
     "A receptionist gently asked the family to keep the child seated until the doctor called.")
item("laughter_medicine", LAU,
     "Rehearsals had turned tense after weeks of missed cues. During the break the "
     "lead actor performed the entire second act as interpretive mime.",
     "The cast laughed themselves limp, and the evening run-through was their best in a month.",
     "The director used the break to hand out written notes on every missed cue.")

PRO = "Procrastination is thief of time"
item("procrastination_thief", PRO,
     "My son put off an oil change that would have taken 20 minutes. 6 months later, "
     "he was sitting at the side of the road with a seized-up engine.",
     "Ultimately, we figured the delay resulted in over 29 hours of combined waiting, "
     "extra travel, and car searching.",
     "Fortunately, my son managed to get the engine fixed quickly by borrowing a "
     "friend's car, saving him from delays.")
item("procrastination_thief", PRO,
     "Lena left her visa renewal form on the counter for one more day, then another. "
     "The deadline slid past while the form waited under junk mail.",
     "Fixing the lapse swallowed three weeks of queues, fees, and rebooked flights.",
     "A consulate clerk waived the deadline kindly and stamped her renewal the same afternoon.")
item("procrastination_thief", PRO,
     "The roof tile Harold meant to fix stayed loose all autumn. He told himself one "
     "tile could wait until the weather improved.",
     "The winter leak ruined the attic and cost him a month of repairs instead of an hour.",
     "The tile held through winter, proving the repair had never been urgent at all.")
item("procrastination_thief", PRO,
     "Priya postponed backing up her laptop until after the conference. The "
     "conference ended, and the backup slid to after the holidays.",
     "When the disk died in January, rebuilding her files devoured an entire working week.",
     "The laptop ran flawlessly for years, and the backup never turned out to matter.")
item("procrastination_thief", PRO,
     "The committee tabled the tiny budget fix every meeting for a year. It was "
     "always too small an item for such a full agenda.",
     "By year's end the small fix had compounded into an audit that consumed the whole spring.",
     "When they finally addressed it, the fix took five minutes exactly as predicted.")
item("procrastination_thief", PRO,
     "Marco kept meaning to register for the licensing exam early. The early window "
     "closed, then the regular one, while he perfected his study plan.",
     "He sat the exam a full year late, his plan costing him far more time than it saved.",
     "The examiners opened a special late window and he sat the exam on schedule anyway.")
item("procrastination_thief", PRO,
     "The garden shed sagged a little more each month Joan put off propping it. There "
     "was always a better weekend for it coming.",
     "Clearing the collapsed shed took five weekends that one afternoon of bracing "
     "would have spared.",
     "A neighbor shored it up one morning without being asked, and the shed stood for decades.")
item("procrastination_thief", PRO,
     "Sam delayed answering the small customer complaint for a quiet day. Quiet days "
     "kept not coming, and the ticket aged at the bottom of the queue.",
     "The refund that would have taken minutes grew into a dispute that ate his quarter.",
     "The customer forgot the complaint entirely and renewed the contract without a word.")
item("procrastination_thief", PRO,
     "My thesis chapter needed one more source, so I paused writing to find it later. "
     "Later stretched through spring while other errands filled the margins.",
     "The pause cost me the summer deadline and a semester of tuition with it.",
     "My advisor found the source in her files the next day and the chapter finished on time.")
item("procrastination_thief", PRO,
     "The dentist's reminder sat unopened in Omar's inbox through the busy season. A "
     "twinge in his molar was noted, filed, and deferred.",
     "The root canal that followed claimed more hours than a decade of checkups would have.",
     "The twinge faded on its own, and his next checkup found nothing wrong at all.")

TAN = "It takes two to tango"
item("two_to_tango", TAN,
     "Jeff and Jane were getting into a fight. Jane pointed the finger, saying it was "
     "all Jeff's fault. Their mother knew better though.",
     "She knew that they both were causing trouble and Jeff and Jane were both punished.",
     "She quickly intervened and helped Jeff up off the floor, advising him to "
     "apologize to Jane.")
item("two_to_tango", TAN,
     "The merger talks collapsed and each company blamed the other's lawyers. "
     "Reporters pressed the mediator for the villain of the story.",
     "She answered that both boards had stonewalled, and neither side danced alone.",
     "She confirmed that the smaller firm's lawyers had single-handedly wrecked the deal.")
item("two_to_tango", TAN,
     "After the fender bender, both drivers pointed across the intersection. Each "
     "insisted the other had rolled the stop sign.",
     "The camera showed what the officer suspected: two cars easing through, neither "
     "one innocent.",
     "The camera cleared the van completely and placed every fault on the sedan.")
item("two_to_tango", TAN,
     "My roommates feuded for a month over the wrecked kitchen. Each swore the mess "
     "began with the other's dishes.",
     "Our landlord shrugged and split the cleaning fee, since the pile had two authors.",
     "The landlord fined only Theo after finding his name on most of the takeout boxes.")
item("two_to_tango", TAN,
     "The duet fell apart on stage, and the soprano glared at the pianist. Backstage, "
     "each described the other's tempo as the saboteur.",
     "The conductor replayed the recording and heard two performers ignoring each "
     "other equally.",
     "The recording proved the pianist had dragged every bar while the soprano kept "
     "perfect time.")
item("two_to_tango", TAN,
     "The border skirmish filled both countries' front pages with outrage. Each "
     "capital published maps proving the other had crossed first.",
     "The tribunal's report found patrols from both sides had strayed, sharing the "
     "spark between them.",
     "The tribunal ruled that only the northern patrol had crossed, vindicating the "
     "south entirely.")
item("two_to_tango", TAN,
     "When the project missed its launch, engineering blamed sales and sales blamed "
     "engineering. The postmortem meeting opened with both teams armed with slides.",
     "The facilitator closed her laptop and noted the slip had been a joint "
     "production from the start.",
     "The facilitator's timeline showed sales alone had sat on the requirements for "
     "six weeks.")
item("two_to_tango", TAN,
     "Their divorce surprised no one, though each told friends a one-sided story. "
     "Mutual friends were pressed to pick a villain over coffee.",
     "Most of them refused, having watched two people take turns letting the marriage fray.",
     "Everyone agreed in the end that the marriage had been wrecked by his gambling alone.")
item("two_to_tango", TAN,
     "The playground scuffle ended with both boys in the principal's office. Each "
     "claimed the shove that started it came from the other.",
     "The yard monitor reported a volley of shoves, and both boys wrote apology letters.",
     "A classmate's video showed Dev standing still while Arlo did all the shoving.")
item("two_to_tango", TAN,
     "The band's breakup interviews turned into a duel of blame. The singer cited "
     "missed rehearsals; the drummer cited rewritten songs.",
     "Their producer laughed at the question, saying the band had quarreled its way "
     "down in tandem.",
     "Their producer sided with the drummer, blaming the singer's rewrites for everything.")

assert len(ROWS) == 50
seen = set()
for r in ROWS:
    assert r["correct_ending"] != r["distractor_ending"]
    for v in r.values():
        assert v and v.isascii(), r["proverb_id"]
    key = (r["proverb_id"], r["context"])
    assert key not in seen, key
    seen.add(key)
    total = len(r["context"]) + 1 + max(len(r["correct_ending"]),
                                        len(r["distractor_ending"]))
    assert total + 2 <= 512, (r["proverb_id"], total)

with open("data/nab/nab_sample.jsonl", "w") as f:
    for r in ROWS:
        f.write(json.dumps(r) + "\n")
print("wrote data/nab/nab_sample.jsonl:", len(ROWS), "items,",
      len({r['proverb_id'] for r in ROWS}), "proverbs")
