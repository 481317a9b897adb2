#!/usr/bin/env python3
"""Build the bundled sample corpus.

Writes the annotated dataset (71 threads / 249 labeled answers with the
published label distribution), a forum dump for user histories and forum
search, a trusted-author thread dump for evidence retrieval, a flat web page
corpus, two small embedding spaces, the cue lexicons and every word list the
pipeline needs, plus a matching run config and a SemEval-style XML rendering
of the dataset for the converter.

Everything is seeded; rerunning the script reproduces identical files.
"""

import argparse
import json
import math
import os
import random
import zlib
from datetime import datetime, timedelta, timezone

LABEL_COUNTS = {
    "FactTrue": 128,
    "PartiallyTrue": 38,
    "ResponderUnsure": 26,
    "FactFalse": 22,
    "NonFactual": 19,
    "ConditionallyTrue": 16,
}
MAP_TARGET = 63.75
MAP_TOL = 0.30

TRUSTED_AUTHORS = ["ql_admin", "desert_sage"]

# ---------------------------------------------------------------- word pools

NOUNS = """visa permit license renewal residence sponsorship passport embassy
ministry interior traffic department test exam fee fees office branch bank
account salary certificate attestation documents papers photo photos medical
fingerprints police clearance hospital clinic doctor appointment insurance
card school admission kindergarten curriculum tuition seat bus metro train
station taxi airport terminal flight baggage customs duty beach corniche park
mall souq market shop shops grocery restaurant buffet brunch menu chicken
machboos karak chai tea coffee milk shawarma apartment villa compound rent
landlord lease deposit electricity kahramaa water internet fiber ooredoo sim
plan roaming mobile phone summer winter heat humidity temperature sandstorm
dust wind weather ramadan eid iftar prayer mosque festival celebrations
fireworks parade holiday weekend weekday family kids children maid nanny gym
pool club membership football stadium cricket desert dunes camel falcon
falcons dhow boat boats pearl island museum library cinema movie ticket
tickets price cost discount offer offers sale car cars vehicle registration
istimara inspection garage mechanic petrol diesel accident fine fines radar
camera cameras speed speeding road roads highway bridge exit roundabout
signal parking map directions route gate grounds village heritage day year
month week morning noon afternoon evening night midnight dawn december
january august september july friday sunday tuesday thursday riyals riyal
hours queue counter copy copies sponsor employer contract gratuity allowances
leave wife husband friend guests owners birds results commission blood letter
law labor staff managers section story drama city area rules process
requirement portal service services smart center centers entrance immigration
person trip ride rows wool needles scarf pattern deals thread residents
newcomers guide timings details help work job jobs classifieds furniture
buyers cash posting swimming sand subscription travel tourism advice events
education motoring dining lounge shows access trial students visitor
visitors""".split()

VERBS = """apply applied renew renewed transfer transferred visit visited
bring brought need needed needs pay paid pays submit submitted collect
collected book booked drive drove driving take takes took go goes went get
gets got find found ask asked asking call called check checked checking open
opens opened close closes closed start starts started finish finished expect
expected live lived work works worked move moved moving travel arrive arrived
leave leaves leaving left wait waited waiting try tried buy bought sell sold
selling hire hired hold held happen happens happened celebrate celebrated
attend attended avoid avoided recommend recommended cancel cancelled extend
extended extends issue issued stamp stamped expire expires expired park
parked serve serves serving run runs running cost costs settle settles looking
ordered meet fill fills post posted use used subscribe hope helps stop stops
stopped answers answered trust change changed charges give gives counts
applies returns""".split()

ADJECTIVES = """new old valid expired official original available cheap
expensive free busy crowded quiet hot cold humid dusty safe dangerous easy
difficult fast slow long short early late local international public private
main nearby annual traditional cultural national religious legal ready
mandatory separate extra basic refundable technical clear clean friendly
wrong nice good bad best thick large normal same full small big
moderate""".split()

ADVERBS = """really usually normally definitely recently currently always
sometimes never twice online daily soon yesterday already completely
fastest""".split()

PRONOUNS = """i me my mine myself we us our ours you your yours he him his
she her hers it its they them their theirs this that these those anyone
anybody anything someone somebody something everyone everybody everything
nobody nothing who whom whose""".split()

# Function words and filler tagged "other" so a capitalized sentence opener
# is read as sentence case, not a name.
OTHER_WORDS = """the a an and or but if so then than as at in on of for to
from with without by about after before during is are was were be been am do
does did done have has had will would can could may might must shall should
not no yes any some all both each much many more most other another what
where when how why which there here also just only even still again per
between under over near around via hi hello dear thanks thank please welcome
ok okay well right sure maybe guys bro mate friends list last first second
third next every own one two three four five six seven eight nine ten lot
bit kind sort stuff thing things way ways now today tomorrow let until
through ha classic luck total following bump ask same see gl pm
google""".split()

SLANG = ["pls", "thx", "gr8", "plz", "btw", "lol", "coz", "u", "ur", "hahaha"]

PLACES = ["Doha", "Al Wakrah", "Al Khor", "West Bay", "Katara", "Lusail",
          "Al Sadd", "Madinat Khalifa", "Al Rayyan", "Mesaieed"]
LANDMARKS = ["Villaggio", "Landmark", "City Center", "Souq Waqif", "Aspire Park",
             "Hamad Hospital", "Katara Beach", "Sealine", "Education City",
             "Hamad International Airport", "Corniche"]

HEDGES = ["maybe", "perhaps", "possibly", "probably", "apparently", "i guess",
          "not sure but", "as far as i know", "i think", "roughly"]
FACTIVES = ["i know that", "i realized that", "i noticed that", "remember that"]
ASSERTIVES = ["i believe", "they claim", "people say", "i would say"]
CONDITIONALS = ["only if you ask,", "provided that papers are ready,",
                "it depends,", "unless rules changed,"]
STRONG_SUBJ = ["amazing", "terrible", "awful", "fantastic", "horrible",
               "brilliant", "wonderful", "disgusting", "outrageous"]
POSITIVE_W = ["great", "excellent", "helpful", "perfect", "best"]
NEGATIVE_W = ["worst", "scam", "fake", "wrong", "useless"]
SMILEYS_POS = [":)", ":-)", ":D", "=)", ";)"]
SMILEYS_NEG = [":(", ":-(", ":'(", ">:("]

# ------------------------------------------------------------------- topics

TOPICS = [
    dict(key="nationalday", category="Events",
         subject="Qatar National Day celebrations location",
         body="Where are the Qatar National Day celebrations held this year? Any details about timings would help.",
         facts=["The celebrations are held at Darb El Saai every december."],
         wrong=["The celebrations moved to the airport terminal this year."],
         words="national day celebrations december parade heritage village timings"),
    dict(key="license", category="Motoring",
         subject="Driving license renewal in {place}",
         body="My license expires next month. Where do i renew it and what documents do i bring? Any tips welcome.",
         facts=["You renew the license at the traffic department in {place}.",
                "The renewal fee is 250 riyals and it takes two days.",
                "Bring your residence permit, a photo and the old license."],
         wrong=["The renewal fee is 50 riyals and it takes two months.",
                "You renew the license at any grocery shop.",
                "No documents are needed, just call the embassy."],
         words="license renew renewal traffic department fee riyals documents photo residence permit test"),
    dict(key="visa", category="Visas and Permits",
         subject="Family visit visa question",
         body="I want to bring my wife on a visit visa. How long does the process take and what is the salary requirement?",
         facts=["The family visit visa needs a salary certificate from your employer.",
                "Processing takes about one week at the ministry of interior.",
                "You can extend the visit visa twice after a medical check."],
         wrong=["No salary certificate is needed for a visit visa.",
                "Processing takes six months at the airport.",
                "The visit visa cannot be extended at all."],
         words="visa visit family salary certificate ministry interior extend medical employer sponsorship"),
    dict(key="medical", category="Health and Fitness",
         subject="Medical test for residence permit",
         body="Where do i do the medical test for a new residence permit and how long do results take?",
         facts=["The medical commission in {place} does the residence test.",
                "Results are ready after two working days.",
                "Fingerprints are taken at the same building after the medical."],
         wrong=["Any private clinic can stamp the residence medical.",
                "Results take two months to arrive by post."],
         words="medical test residence permit fingerprints results commission clinic blood"),
    dict(key="bank", category="Advice and Help",
         subject="Opening a bank account without residence",
         body="Can i open a bank account while my residence permit is still in process? Which bank is easy?",
         facts=["Most banks need the residence permit before opening an account.",
                "Some branches open a basic account with a letter from your employer."],
         wrong=["Every bank opens accounts with just a passport, no permit needed."],
         words="bank account branch residence permit letter employer salary passport"),
    dict(key="school", category="Education",
         subject="School admission timings",
         body="When does admission open for schools in {place}? My kids need a seat for september.",
         facts=["Admission for most schools opens in january.",
                "You need attestation of the old school certificate.",
                "Tuition at private schools starts around 25000 riyals a year."],
         wrong=["Admission opens in august, one week before classes.",
                "No attestation is ever checked by schools."],
         words="school admission kids children certificate attestation tuition seat january september curriculum"),
    dict(key="beach", category="Travel and Tourism",
         subject="Best beach near {place}?",
         body="Looking for a clean quiet beach for the family this weekend. Any recommendation?",
         facts=["{landmark} is clean and family friendly in the morning.",
                "The public beach near {place} gets crowded after noon on friday."],
         wrong=["All beaches are closed to the public in winter."],
         words="beach family weekend clean quiet crowded public morning swimming sand"),
    dict(key="karak", category="Dining",
         subject="Where to get good karak in {place}",
         body="Ok guys, settle this. Who serves the best karak tea late at night?",
         facts=["The tea shop behind the {landmark} parking serves karak until two at night.",
                "A cup of karak costs one riyal at most small shops."],
         wrong=["Karak is banned after midnight everywhere."],
         words="karak tea shop night cup riyal chai milk"),
    dict(key="metro", category="Advice and Help",
         subject="Metro timings during ramadan",
         body="What are the metro timings during ramadan? I finish work late and need the last train from {place}.",
         facts=["During ramadan the metro runs until midnight on weekdays.",
                "The last train leaves {place} station around one at night on weekends."],
         wrong=["The metro stops at six in the evening during ramadan."],
         words="metro train station timings ramadan midnight weekday weekend last"),
    dict(key="moi", category="Visas and Permits",
         subject="MOI online services for permit renewal",
         body="Can i renew the residence permit online or do i have to visit the ministry office in person?",
         facts=["Renewal works online through the ministry portal with a smart card.",
                "The online service charges the same 500 riyals fee."],
         wrong=["Online renewal was cancelled, you must queue at the office."],
         words="online portal renewal residence permit ministry smart card fee service"),
    dict(key="istimara", category="Motoring",
         subject="Car registration renewal (istimara)",
         body="My istimara expires soon. Is inspection needed for a three year old car? Where is the inspection done?",
         facts=["Cars older than three years need the technical inspection first.",
                "Inspection centers in {place} open at seven in the morning.",
                "You pay the traffic fines before the registration renews."],
         wrong=["No inspection is needed for any car, ever.",
                "Inspection centers open only at night."],
         words="car registration istimara inspection fines traffic renewal vehicle center"),
    dict(key="kahramaa", category="Advice and Help",
         subject="Kahramaa bill and moving flats",
         body="Moving to a new apartment in {place}. How do i transfer the kahramaa account and get the deposit back?",
         facts=["You close the old kahramaa account online and the deposit returns to your bank.",
                "The new landlord letter and your permit copy open the new account."],
         wrong=["Deposits are never returned by kahramaa."],
         words="kahramaa electricity water account deposit apartment landlord transfer bill"),
    dict(key="gratuity", category="Jobs in Qatar",
         subject="End of service gratuity calculation",
         body="How is the end of service gratuity calculated? Three weeks per year or four?",
         facts=["The law gives three weeks of basic salary per year of service.",
                "Gratuity counts only the basic salary, not allowances."],
         wrong=["Gratuity is one week per year and includes allowances.",
                "There is no gratuity under the new contract law."],
         words="gratuity salary basic service year contract law allowances employer weeks"),
    dict(key="souq", category="Travel and Tourism",
         subject="Souq Waqif falcon market timings",
         body="Visiting with guests next week. When is the falcon souq open and is photography ok?",
         facts=["The falcon souq opens after four in the afternoon.",
                "Photography is fine if you ask the owners first."],
         wrong=["The falcon souq opens only at dawn on sunday."],
         words="souq falcon market photography afternoon guests owners birds"),
    dict(key="sandstorm", category="Qatar Living Lounge",
         subject="Sandstorm season driving tips",
         body="First summer here. Any advice for driving during a sandstorm on the highway?",
         facts=["Slow down and keep the headlights on low beam in a sandstorm.",
                "Radar fines still apply in bad weather, the cameras stay on."],
         wrong=["Hazard lights while moving are required by law in sandstorms."],
         words="sandstorm driving highway headlights weather radar fines summer dust wind"),
    dict(key="cinema", category="Events",
         subject="Cheap cinema tickets day",
         body="Is there still a discount day for cinema tickets at {landmark}?",
         facts=["Tickets are half price on tuesday at most mall cinemas.",
                "The morning shows cost 35 riyals any day."],
         wrong=["Discounts ended years ago at all cinemas."],
         words="cinema tickets discount tuesday price mall shows riyals movie"),
    dict(key="gym", category="Health and Fitness",
         subject="Gym membership that includes pool",
         body="Looking for a gym with a pool near {place}. What does a yearly membership cost?",
         facts=["The club at {landmark} charges 3000 riyals a year with pool access.",
                "Most gyms give a free trial week if you ask."],
         wrong=["Pools are never included in any gym membership."],
         words="gym pool membership club yearly riyals trial fitness access"),
    dict(key="eid", category="Events",
         subject="Eid fireworks location this year",
         body="Where are the eid fireworks this year? Corniche again or {landmark}?",
         facts=["The fireworks are on the corniche both eid evenings at eight.",
                "Extra parking opens near the museum during eid nights."],
         wrong=["Fireworks are cancelled this year completely."],
         words="eid fireworks corniche evening parking museum holiday nights celebration"),
    dict(key="maid", category="Family Life in Qatar",
         subject="Maid visa sponsorship cost",
         body="What does it cost to sponsor a maid and is there a salary deposit now?",
         facts=["The maid visa costs about 5000 riyals with the medical and permit.",
                "A refundable deposit is asked from new sponsors at the immigration counter."],
         wrong=["Sponsoring a maid is free of any fees."],
         words="maid visa sponsorship deposit immigration permit medical sponsor cost"),
    dict(key="pearl", category="Travel and Tourism",
         subject="Dhow boat trip from the corniche",
         body="How much is the dhow boat ride from the corniche and do they run in summer?",
         facts=["A short dhow ride costs 20 riyals per person in the evening.",
                "Boats stop at noon in july and august because of the heat."],
         wrong=["Dhow rides cost 500 riyals and need a booking a month ahead."],
         words="dhow boat corniche ride riyals evening summer heat trip person"),
    dict(key="internet", category="Advice and Help",
         subject="Home internet installation waiting time",
         body="Ordered home internet two weeks ago, still waiting. Is this normal in {place}?",
         facts=["Installation normally takes five working days in the city.",
                "New compounds wait longer until the cabinet is connected."],
         wrong=["Same day installation is guaranteed by law."],
         words="internet installation home fiber days compound cabinet ooredoo connection"),
    dict(key="traffic_fine", category="Motoring",
         subject="Checking traffic fines online",
         body="Got flashed near {place} yesterday. How do i check the fine online and is there a discount for early payment?",
         facts=["Fines show on the ministry portal after two or three days.",
                "Radar fines are 500 riyals for moderate speeding."],
         wrong=["Fines only arrive by post after a year."],
         words="fine fines radar portal online payment speeding riyals camera check"),
    dict(key="ramadan_work", category="Jobs in Qatar",
         subject="Working hours during ramadan",
         body="Are working hours reduced for everyone during ramadan or only for muslims? What does the law say?",
         facts=["The labor law reduces the working day to six hours in ramadan.",
                "The reduction applies to all staff on paper, practice varies."],
         wrong=["Hours are reduced only for managers."],
         words="ramadan working hours law labor staff office"),
    dict(key="classifieds", category="Classifieds Talk",
         subject="Selling furniture before leaving",
         body="Leaving {place} next month and selling all furniture. Best way to post classifieds here?",
         facts=["Photos and a clear price sell fastest in the classifieds section.",
                "Meet buyers at your compound gate and take cash only."],
         wrong=["Classified posts need a government stamp first."],
         words="classifieds furniture selling price photos buyers cash posting section"),
]
FIXTURE_TOPIC = 0  # nationalday; appears in the dataset only as thread one

FIXTURE_ANSWER = "The celebrations are held at Darb El Saai every december."
# Other labeled answers in the fixture thread avoid the venue name so the
# dataset carries it exactly once.
FIXTURE_ALT_FACTS = [
    "The events run all december long at the heritage village area.",
    "Shows start in the morning and the parade is in the afternoon.",
]
FIXTURE_CORRECT_SENT = ("The national day celebrations are held in december "
                        "at the heritage village grounds.")
FIXTURE_DISTRACTOR_SENT = ("Darb El Saai route map with Darb El Saai parking "
                           "areas and Darb El Saai gate times.")

USERS = """expat_sara doha_dave old_timer_99 qlfan karak_lover desert_rose
mido_cars hamad_f1 teacher_tom villa_hunter suhail_m bluecity fatima_k
bored_at_work falcon_eye newbie2015 pearl_diver corniche_runner aisha_q
mrsmith salem_auto budget_bachelor mango_juice night_shift_nurse
alkhor_fisher gulf_gooner shawarma_sam hr_insider taxi_talk west_bay_wanderer
umm_ali crazy_cat_lady landlord_larry metro_mike souq_sally visa_victor
duneblaster qatarina compound_mum kiteflyer stopover_steve chai_addict
grumpy_gazelle sunshine77""".split()

REPUTED_HOSTS = ["dohanews.co", "gulf-times.com", "thepeninsulaqatar.com",
                 "aljazeera.com", "reuters.com"]
FORUM_HOSTS = ["www.qatarliving.com", "www.iloveqatar.net", "forum.expatwoman.com"]
OTHER_HOSTS = ["qatarexpatblog.example.com", "travelnotes.example.org",
               "deals4you.example.net", "knittingcorner.example.org"]


def fmt_utc(ts):
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def fmt_local(ts, offset_min=180):
    local = datetime.fromtimestamp(ts, tz=timezone.utc) + timedelta(minutes=offset_min)
    return local.strftime("%Y-%m-%d %H:%M:%S")


def xml_escape(s):
    return (s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
             .replace('"', "&quot;"))


# ------------------------------------------------------------ label layout

def chrono_map(threads):
    """AP of thread-order ranking, positives = FactTrue, as a percentage."""
    aps = []
    for t in threads:
        hits, s = 0, 0.0
        for i, y in enumerate(t, start=1):
            if y == "FactTrue":
                hits += 1
                s += hits / i
        if hits:
            aps.append(s / hits)
    return 100.0 * sum(aps) / len(aps)


def allocate_labels(rng):
    """Per-thread ordered label lists hitting the published counts exactly,
    ordered so the chronological ranking scores near the target."""
    labels = []
    for name, count in LABEL_COUNTS.items():
        labels.extend([name] * count)
    rng.shuffle(labels)

    sizes = [4] * 36 + [3] * 35
    rng.shuffle(sizes)
    assert sum(sizes) == len(labels) == 249

    threads, at = [], 0
    for size in sizes:
        threads.append(labels[at:at + size])
        at += size

    # Hill climb: swap two labels inside one thread while it moves the score
    # toward the target.
    current = chrono_map(threads)
    for _ in range(300000):
        if abs(current - MAP_TARGET) <= MAP_TOL * 0.5:
            break
        t = threads[rng.randrange(len(threads))]
        i, j = rng.randrange(len(t)), rng.randrange(len(t))
        if i == j or t[i] == t[j]:
            continue
        t[i], t[j] = t[j], t[i]
        cand = chrono_map(threads)
        if abs(cand - MAP_TARGET) < abs(current - MAP_TARGET):
            current = cand
        else:
            t[i], t[j] = t[j], t[i]
    assert abs(current - MAP_TARGET) <= MAP_TOL, f"calibration failed: {current}"

    # The fixture thread (index 0) needs a FactTrue slot. Swapping whole
    # label lists between two threads of equal size keeps the score intact.
    if "FactTrue" not in threads[0]:
        for j in range(1, len(threads)):
            if len(threads[j]) == len(threads[0]) and "FactTrue" in threads[j]:
                threads[0], threads[j] = threads[j], threads[0]
                break
    assert "FactTrue" in threads[0]
    assert abs(chrono_map(threads) - current) < 1e-9
    return threads, current


# ------------------------------------------------------------- text making

class TextMaker:
    def __init__(self, rng):
        self.rng = rng

    def fill(self, template, topic):
        out = template
        while "{place}" in out:
            out = out.replace("{place}", self.rng.choice(PLACES), 1)
        while "{landmark}" in out:
            out = out.replace("{landmark}", self.rng.choice(LANDMARKS), 1)
        return out

    def chatter(self, topic):
        """A filler sentence reusing the topic vocabulary."""
        rng = self.rng
        words = topic["words"].split()
        picks = rng.sample(words, k=min(3, len(words)))
        patterns = [
            "The {0} near the {1} was fine last {2}.".format(picks[0], picks[1], rng.choice(["week", "month", "year"])),
            "Ask about the {0} at the {1} counter.".format(picks[0], picks[1]),
            "We checked the {0} and the {1} yesterday.".format(picks[0], picks[1]),
            "My friend got the {0} done in {1}.".format(picks[0], rng.choice(PLACES)),
            "Same {0} story every {1}.".format(picks[0], rng.choice(["summer", "winter", "year"])),
        ]
        return rng.choice(patterns)

    def decorate(self, sentences, label):
        rng = self.rng
        p = dict(
            FactTrue=dict(hedge=0.10, factive=0.45, assertive=0.20, neg=0.12, excl=0.22,
                          quest=0.04, smile=0.12, strong=0.15, pos=0.30, cond=0.03),
            FactFalse=dict(hedge=0.38, factive=0.12, assertive=0.42, neg=0.45, excl=0.25,
                           quest=0.12, smile=0.10, strong=0.25, pos=0.08, cond=0.10),
            PartiallyTrue=dict(hedge=0.55, factive=0.12, assertive=0.30, neg=0.40, excl=0.15,
                               quest=0.15, smile=0.10, strong=0.15, pos=0.12, cond=0.20),
            ConditionallyTrue=dict(hedge=0.40, factive=0.10, assertive=0.20, neg=0.30, excl=0.10,
                                   quest=0.10, smile=0.08, strong=0.10, pos=0.10, cond=0.90),
            ResponderUnsure=dict(hedge=0.90, factive=0.05, assertive=0.25, neg=0.45, excl=0.10,
                                 quest=0.50, smile=0.12, strong=0.10, pos=0.08, cond=0.15),
            NonFactual=dict(hedge=0.25, factive=0.05, assertive=0.15, neg=0.30, excl=0.65,
                            quest=0.30, smile=0.55, strong=0.65, pos=0.25, cond=0.05),
        )[label]

        first = sentences[0]
        if rng.random() < p["cond"]:
            first = rng.choice(CONDITIONALS).capitalize() + " " + first[0].lower() + first[1:]
        elif rng.random() < p["factive"]:
            first = rng.choice(FACTIVES).capitalize() + " " + first[0].lower() + first[1:]
        elif rng.random() < p["assertive"]:
            first = rng.choice(ASSERTIVES).capitalize() + " " + first[0].lower() + first[1:]
        if rng.random() < p["hedge"]:
            h = rng.choice(HEDGES)
            first = h.capitalize() + ", " + first[0].lower() + first[1:]
        sentences = [first] + list(sentences[1:])

        if rng.random() < p["neg"]:
            sentences.append(rng.choice([
                "Do not trust the old rules.",
                "It is not the same as before.",
                "Nobody answers the phone there.",
                "That was never a problem for us.",
            ]))
        if rng.random() < p["quest"]:
            sentences.append(rng.choice([
                "Anyone tried recently?", "Did the rules change?", "Why is it so slow?",
            ]))
        if rng.random() < p["strong"]:
            sentences.append("The queue was " + rng.choice(STRONG_SUBJ) + " " +
                             rng.choice(["last time.", "in summer.", "on thursday."]))
        if rng.random() < p["pos"]:
            sentences.append("Staff were " + rng.choice(POSITIVE_W) + " btw.")
        elif rng.random() < 0.15:
            sentences.append("Total " + rng.choice(NEGATIVE_W) + ", avoid it.")

        text = " ".join(sentences)
        if rng.random() < p["excl"]:
            text += rng.choice(["!", "!!", "!!!"])
        if rng.random() < p["smile"]:
            good = label in ("FactTrue", "NonFactual")
            text += " " + rng.choice(SMILEYS_POS if good else SMILEYS_NEG)
        if rng.random() < 0.08:
            text += " " + rng.choice(SLANG)
        if rng.random() < 0.07:
            text += " Check http://portal.moi.gov.qa for updates."
        if rng.random() < 0.04:
            text += " Call 4406-" + str(rng.randrange(1000, 9999)) + " to confirm."
        if rng.random() < 0.03:
            text += " See map.jpg for the exit."
        return text

    def answer_text(self, topic, label):
        rng = self.rng
        if label == "FactTrue":
            core = [self.fill(rng.choice(topic["facts"]), topic)]
        elif label == "FactFalse":
            core = [self.fill(rng.choice(topic["wrong"]), topic)]
        elif label == "PartiallyTrue":
            core = [self.fill(rng.choice(topic["facts"]), topic),
                    "But the other part changed recently."]
        elif label == "ConditionallyTrue":
            core = [self.fill(rng.choice(topic["facts"]), topic)]
        elif label == "ResponderUnsure":
            core = [self.fill(rng.choice(topic["facts"] + topic["wrong"]), topic)]
        else:  # NonFactual
            core = [rng.choice([
                "This city never stops surprising me.",
                "Good luck with that, you will need karak first.",
                "Ha, classic {0} drama.".format(rng.choice(["doha", "compound", "office"])),
                "I just like the " + rng.choice(["fireworks", "karak", "corniche", "dunes"]) + ".",
            ])]
        if rng.random() < 0.5:
            core.append(self.chatter(topic))
        return self.decorate(core, label)

    def unlabeled_text(self, topic, goodness):
        rng = self.rng
        if goodness == "Bad":
            return rng.choice([
                "lol", "bump", "Following this thread.", "pm me pls",
                "Wrong section mate.", "Ask google.", "?????",
                "Nice :)", "hahaha " + rng.choice(SLANG),
            ])
        return self.chatter(topic) + rng.choice(["", " Hope that helps.", " gl!"])


# ------------------------------------------------------------------ builder

def rotation_topic(ti):
    others = TOPICS[:FIXTURE_TOPIC] + TOPICS[FIXTURE_TOPIC + 1:]
    return TOPICS[FIXTURE_TOPIC] if ti == 0 else others[(ti - 1) % len(others)]


def build_threads(rng, text, label_threads):
    users = list(USERS)
    power = users[:10]

    def pick_user():
        return rng.choice(power) if rng.random() < 0.45 else rng.choice(users)

    base = int(datetime(2015, 1, 5, tzinfo=timezone.utc).timestamp())
    horizon = int(datetime(2016, 2, 20, tzinfo=timezone.utc).timestamp())

    threads = []
    for ti, labels in enumerate(label_threads):
        topic = rotation_topic(ti)
        if ti == 0:
            topic = dict(topic, facts=FIXTURE_ALT_FACTS)
        qid = "q%03d" % (ti + 1)
        t0 = rng.randrange(base, horizon)
        thread = dict(
            question=dict(
                id=qid,
                subject=text.fill(topic["subject"], topic),
                body=text.fill(topic["body"], topic),
                category=topic["category"],
                timestamp=t0,
                user_id=pick_user(),
            ),
            answers=[],
        )

        slots = []
        fixture_done = False
        for label in labels:
            if ti == 0 and label == "FactTrue" and not fixture_done:
                slots.append(("fixture", label))
                fixture_done = True
            else:
                slots.append(("labeled", label))
        for _ in range(rng.choice([0, 0, 1, 1, 2])):
            slots.insert(rng.randrange(len(slots) + 1),
                         ("unlabeled", rng.choice(["Bad", "Bad", "PotentiallyUseful"])))

        ts = t0
        for pos, (kind, tag) in enumerate(slots, start=1):
            ts += rng.randrange(300, 86400 * 2)
            aid = "%s_a%d" % (qid, pos)
            if kind == "fixture":
                body, goodness, fact = FIXTURE_ANSWER, "Good", tag
            elif kind == "labeled":
                body, goodness, fact = text.answer_text(topic, tag), "Good", tag
            else:
                body, goodness, fact = text.unlabeled_text(topic, tag), tag, None
            thread["answers"].append(dict(
                id=aid, body=body, timestamp=ts, user_id=pick_user(),
                thread_position=pos, goodness=goodness, fact_label=fact,
            ))
        threads.append(thread)
    return threads


def build_dump(rng, text):
    """Unannotated threads: user history mass plus the forum search corpus."""
    users = list(USERS)
    base = int(datetime(2014, 6, 1, tzinfo=timezone.utc).timestamp())
    horizon = int(datetime(2016, 3, 10, tzinfo=timezone.utc).timestamp())
    threads = []
    for di in range(90):
        topic = TOPICS[rng.randrange(len(TOPICS))]
        qid = "d%03d" % (di + 1)
        t0 = rng.randrange(base, horizon)
        thread = dict(
            question=dict(
                id=qid,
                subject=text.fill(topic["subject"], topic),
                body=text.fill(topic["body"], topic) + " Asking for qatar newcomers.",
                category=topic["category"],
                timestamp=t0,
                user_id=rng.choice(users),
            ),
            answers=[],
        )
        ts = t0
        for pos in range(1, rng.choice([2, 3, 3, 4, 5]) + 1):
            ts += rng.randrange(600, 86400 * 3)
            goodness = rng.choice(["Good", "Good", "Good", "Bad", "PotentiallyUseful"])
            if goodness == "Good":
                body = text.fill(rng.choice(topic["facts"]), topic)
                if rng.random() < 0.6:
                    body += " " + text.chatter(topic)
            else:
                body = text.unlabeled_text(topic, goodness)
            thread["answers"].append(dict(
                id="%s_a%d" % (qid, pos), body=body, timestamp=ts,
                user_id=rng.choice(users), thread_position=pos,
                goodness=goodness, fact_label=None,
            ))
        threads.append(thread)
    return threads


def build_hq(rng, text):
    """Trusted-author threads. The fixture topic thread carries only the
    distractor answer so term frequencies stay controlled."""
    base = int(datetime(2014, 9, 1, tzinfo=timezone.utc).timestamp())
    threads = []
    for hi in range(26):
        topic = TOPICS[hi % len(TOPICS)]
        fixture = topic["key"] == "nationalday" and hi < len(TOPICS)
        qid = "h%03d" % (hi + 1)
        t0 = base + hi * 86400 * 17 + rng.randrange(0, 86400)
        author = TRUSTED_AUTHORS[hi % 2]
        if fixture:
            body_sents = [FIXTURE_CORRECT_SENT,
                          "Roads close around the area from early morning.",
                          "Families attend the parade and the heritage shows for free."]
        else:
            body_sents = [text.fill(f, topic) for f in topic["facts"]]
            body_sents.append(text.fill(
                "Office hours and fees are posted at the {landmark} entrance.", topic))
        thread = dict(
            question=dict(
                id=qid,
                subject="Guide: " + text.fill(topic["subject"], topic).lower(),
                body=" ".join(body_sents),
                category=topic["category"],
                timestamp=t0,
                user_id=author,
            ),
            answers=[],
        )
        ts = t0
        if fixture:
            thread["answers"].append(dict(
                id="%s_a1" % qid, body=FIXTURE_DISTRACTOR_SENT,
                timestamp=ts + 7200, user_id=TRUSTED_AUTHORS[0],
                thread_position=1, goodness="Good", fact_label=None,
            ))
        else:
            # Mixed authorship; only trusted posts enter the evidence index.
            for pos in range(1, rng.choice([1, 2, 2, 3]) + 1):
                ts += rng.randrange(3600, 86400)
                trusted = rng.random() < 0.5
                body = text.fill(rng.choice(topic["facts"]), topic) + " " + text.chatter(topic)
                thread["answers"].append(dict(
                    id="%s_a%d" % (qid, pos), body=body, timestamp=ts,
                    user_id=TRUSTED_AUTHORS[(hi + pos) % 2] if trusted else rng.choice(USERS),
                    thread_position=pos, goodness="Good", fact_label=None,
                ))
        threads.append(thread)
    return threads


def build_web_corpus(rng, text):
    pages = []
    seen_urls = set()

    def add(host, slug, title, body_sents):
        url = "https://%s/%s" % (host, slug)
        if url in seen_urls:
            return
        seen_urls.add(url)
        pages.append(dict(url=url, title=title, text=" ".join(body_sents)))

    for topic in TOPICS:
        words = topic["words"].split()
        for variant in range(3):
            sents = [text.fill(f, topic) for f in topic["facts"]]
            sents.append("Residents of qatar ask about the %s every %s." %
                         (words[0], rng.choice(["week", "month", "season"])))
            sents.append(text.chatter(topic))
            if variant == 0:
                host = rng.choice(REPUTED_HOSTS)
                title = "Qatar guide: " + text.fill(topic["subject"], topic).lower()
            elif variant == 1:
                host = rng.choice(FORUM_HOSTS)
                title = text.fill(topic["subject"], topic) + " - forum thread"
                sents.insert(0, "Thread about " + words[0] + " in qatar.")
            else:
                host = rng.choice(OTHER_HOSTS)
                title = text.fill(topic["subject"], topic)
                if rng.random() < 0.5:
                    sents = sents[:2] + ["Subscribe for more travel deals and offers."]
            slug = "%s-%s-%d" % (topic["key"], words[variant % len(words)], variant)
            add(host, slug, title, sents)

    # Pages that never pass the relevance filter: no keyword anywhere.
    for i in range(8):
        add(OTHER_HOSTS[-1], "pattern-%d" % i, "Cable knitting pattern %d" % i,
            ["Rows of garter stitch with a twisted cable panel.",
             "Use thick wool and large needles for the winter scarf."])

    add("dohanews.co", "national-day-darb-el-saai",
        "Qatar National Day celebrations guide",
        [FIXTURE_CORRECT_SENT,
         "Shows run from morning until late evening through the holiday.",
         "Parking fills early so take the metro to the corniche."])
    return pages


# --------------------------------------------------------------- vocabulary

def tokenize(s):
    out, token = [], ""
    for ch in s.lower():
        if ch.isalnum() or ch == "'":
            token += ch
        else:
            if token:
                out.append(token)
            token = ""
    if token:
        out.append(token)
    return out


def collect_vocab(threads, dump, hq, pages):
    vocab = set()

    def grab(s):
        vocab.update(tokenize(s))

    for t in threads + dump + hq:
        grab(t["question"]["subject"])
        grab(t["question"]["body"])
        for a in t["answers"]:
            grab(a["body"])
    for p in pages:
        grab(p["title"])
        grab(p["text"])
    vocab |= set(NOUNS + VERBS + ADJECTIVES + ADVERBS + PRONOUNS + OTHER_WORDS)
    vocab |= set(w.lower() for w in SLANG)
    return vocab


# --------------------------------------------------------------- embeddings

def build_embeddings(vocab):
    word_topic = {}
    for idx, topic in enumerate(TOPICS):
        for w in topic["words"].split():
            word_topic.setdefault(w, idx)

    def make_space(dim, seed, skip):
        rng = random.Random(seed)
        centroids = [[rng.gauss(0, 1) for _ in range(dim)] for _ in TOPICS]
        lines = []
        for w in sorted(vocab):
            if w in skip:
                continue
            wr = random.Random(zlib.crc32(("%d:%s" % (seed, w)).encode()))
            noise = [wr.gauss(0, 1) for _ in range(dim)]
            if w in word_topic:
                c = centroids[word_topic[w]]
                vec = [0.75 * c[i] + 0.25 * noise[i] for i in range(dim)]
            else:
                vec = noise
            norm = math.sqrt(sum(v * v for v in vec)) or 1.0
            lines.append(w + " " + " ".join("%.6f" % (v / norm) for v in vec))
        return lines

    news = make_space(24, 9001, skip=set(SLANG))
    forum = make_space(16, 9002, skip=set())
    return news, forum


# -------------------------------------------------------------------- files

def write_lexicons(outdir):
    lex = {
        "factive": "know knew knows realize realized notice noticed regret discover discovered remember forget forgot admit admitted",
        "assertive": "think thinks thought believe believes claim claims assert argue argues suggest suggests say says said state insist maintain",
        "implicative": "manage managed fail failed attempt attempted bother dare happen happened venture",
        "hedge": "maybe perhaps possibly probably apparently somewhat likely unlikely seems seem roughly around almost barely guess",
        "report_verb": "told report reported announce announced confirm confirmed deny denied mention mentioned according reply replied",
        "wiki_bias": "actually clearly obviously famous notorious so-called controversial legendary infamous fortunately sadly",
        "modal": "can could may might must shall should will would ought",
        "negation": "not no never none nobody nothing neither nor cannot can't don't doesn't didn't won't wouldn't isn't aren't wasn't",
        "strong_subj": "amazing terrible awful fantastic horrible stupid brilliant outrageous wonderful disgusting ridiculous awesome",
        "weak_subj": "good bad nice poor fine decent fair odd simple slow plain",
        "positive": "good great love excellent happy best helpful perfect thanks welcome clean friendly free",
        "negative": "bad worst hate awful terrible wrong problem scam fake useless slow crowded dirty",
        "strong_subj_adverbs": "really very extremely absolutely totally completely utterly",
    }
    os.makedirs(os.path.join(outdir, "lexicons"), exist_ok=True)
    for name, words in lex.items():
        with open(os.path.join(outdir, "lexicons", name + ".txt"), "w") as f:
            f.write("# one cue per line\n")
            for w in words.split():
                f.write(w + "\n")


def write_word_classes(outdir, vocab):
    classes = {}

    def put(words, cls):
        for w in words:
            classes.setdefault(w.lower(), cls)

    put(NOUNS, "noun")
    put(VERBS, "verb")
    put(ADJECTIVES, "adjective")
    put(ADVERBS, "adverb")
    put(PRONOUNS, "pronoun")
    put(OTHER_WORDS, "other")
    put([w.lower() for w in SLANG], "other")

    nouns, verbs = set(NOUNS), set(VERBS)
    for w in sorted(vocab):
        if w in classes or w.isdigit() or w == "quickly":
            continue
        if w.endswith("s") and (w[:-1] in nouns or w[:-2] + "y" in nouns):
            classes[w] = "noun"
        elif w.endswith("ed") and (w[:-2] in verbs or w[:-1] in verbs):
            classes[w] = "verb"
        elif w.endswith("ing") and (w[:-3] in verbs or w[:-3] + "e" in verbs):
            classes[w] = "verb"
        else:
            classes[w] = "other"

    with open(os.path.join(outdir, "word_classes.tsv"), "w") as f:
        for w in sorted(classes):
            f.write("%s\t%s\n" % (w, classes[w]))


def write_categories(outdir, used):
    fillers = []
    areas = ["Life", "Talk", "Corner", "Club", "Board", "Lane", "Spot", "Hub"]
    themes = ["Fishing", "Gardening", "Photography", "Poetry", "Cycling", "Hiking",
              "Cooking", "Chess", "Sailing", "Painting", "History", "Astronomy",
              "Languages", "Volunteering", "Collectibles", "Woodwork", "Calligraphy",
              "Robotics", "Drones", "Board Games", "Camping", "Running", "Tennis",
              "Squash", "Swimming", "Diving", "Karting", "Bowling", "Archery"]
    for t in themes:
        for a in areas:
            fillers.append("%s %s" % (t, a))
    cats = list(used)
    for f in fillers:
        if len(cats) >= 197:
            break
        if f not in cats:
            cats.append(f)
    assert len(cats) == 197, len(cats)
    with open(os.path.join(outdir, "categories.txt"), "w") as f:
        f.write("# forum categories, one per line\n")
        for c in cats:
            f.write(c + "\n")


def thread_to_json(thread):
    q = thread["question"]
    obj = dict(question=dict(
        id=q["id"], subject=q["subject"], body=q["body"], category=q["category"],
        timestamp=fmt_utc(q["timestamp"]), user_id=q["user_id"]))
    answers = []
    for a in thread["answers"]:
        row = dict(id=a["id"], body=a["body"], timestamp=fmt_utc(a["timestamp"]),
                   user_id=a["user_id"], thread_position=a["thread_position"],
                   goodness=a["goodness"])
        if a["fact_label"]:
            row["fact_label"] = a["fact_label"]
        answers.append(row)
    obj["answers"] = answers
    return json.dumps(obj, ensure_ascii=False)


def write_jsonl(path, threads):
    with open(path, "w") as f:
        for t in threads:
            f.write(thread_to_json(t) + "\n")


def write_xml(path, threads):
    out = ['<?xml version="1.0" encoding="UTF-8"?>', "<xml>"]
    for t in threads:
        q = t["question"]
        out.append("<Thread>")
        out.append(
            '<RelQuestion RELQ_ID="%s" RELQ_CATEGORY="%s" RELQ_USERID="%s" RELQ_DATE="%s">'
            % (q["id"], xml_escape(q["category"]), q["user_id"], fmt_local(q["timestamp"])))
        out.append("<RelQSubject>%s</RelQSubject>" % xml_escape(q["subject"]))
        out.append("<RelQBody>%s</RelQBody>" % xml_escape(q["body"]))
        out.append("</RelQuestion>")
        for a in t["answers"]:
            fact = ' RELC_FACT_LABEL="%s"' % a["fact_label"] if a["fact_label"] else ""
            out.append(
                '<RelComment RELC_ID="%s" RELC_USERID="%s" RELC_DATE="%s" RELC_RELEVANCE2RELQ="%s"%s>'
                % (a["id"], a["user_id"], fmt_local(a["timestamp"]), a["goodness"], fact))
            out.append("<RelCText>%s</RelCText>" % xml_escape(a["body"]))
            out.append("</RelComment>")
        out.append("</Thread>")
    out.append("</xml>")
    with open(path, "w") as f:
        f.write("\n".join(out) + "\n")


def write_config(root):
    cfg = {
        "dataset": "../data/dataset.jsonl",
        "forum_dump": "../data/forum_dump.jsonl",
        "hq_dump": "../data/hq_dump.jsonl",
        "trusted_authors": "../data/trusted_authors.txt",
        "web_corpus": "../data/web_corpus.jsonl",
        "bias_lexicon_dir": "../data/lexicons",
        "word_classes": "../data/word_classes.tsv",
        "smileys_positive": "../data/smileys_positive.txt",
        "smileys_negative": "../data/smileys_negative.txt",
        "categories": "../data/categories.txt",
        "domains_reputed": "../data/domains_reputed.txt",
        "domains_forum": "../data/domains_forum.txt",
        "embeddings": [
            {"name": "news", "path": "../data/embeddings/news.vec"},
            {"name": "forum", "path": "../data/embeddings/forum.vec"},
        ],
        "web_fixtures": "../data/fixtures/web_search.jsonl",
        "forum_fixtures": "../data/fixtures/forum_search.jsonl",
        "lambda": 0.001,
        "epochs": 50,
        "seed": 42,
        "k": 5,
        "relevance_keywords": ["qatar"],
        "utc_offset_minutes": 180,
        "weekend": [5, 6],
        "chronological_ascending": True,
    }
    os.makedirs(os.path.join(root, "configs"), exist_ok=True)
    with open(os.path.join(root, "configs", "sample.json"), "w") as f:
        json.dump(cfg, f, indent=2)
        f.write("\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--root", default=os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                    help="repository root (default: parent of this script)")
    args = ap.parse_args()
    root = args.root
    outdir = os.path.join(root, "data")
    os.makedirs(outdir, exist_ok=True)
    os.makedirs(os.path.join(outdir, "embeddings"), exist_ok=True)
    os.makedirs(os.path.join(outdir, "semeval"), exist_ok=True)
    os.makedirs(os.path.join(outdir, "fixtures"), exist_ok=True)

    label_threads, calibrated = allocate_labels(random.Random(4201))
    text = TextMaker(random.Random(4302))
    threads = build_threads(random.Random(4403), text, label_threads)
    dump = build_dump(random.Random(4504), TextMaker(random.Random(4505)))
    hq = build_hq(random.Random(4606), TextMaker(random.Random(4607)))
    pages = build_web_corpus(random.Random(4708), TextMaker(random.Random(4709)))

    write_jsonl(os.path.join(outdir, "dataset.jsonl"), threads)
    write_jsonl(os.path.join(outdir, "forum_dump.jsonl"), dump)
    write_jsonl(os.path.join(outdir, "hq_dump.jsonl"), hq)
    write_xml(os.path.join(outdir, "semeval", "ql-fact-sample.xml"), threads)

    with open(os.path.join(outdir, "web_corpus.jsonl"), "w") as f:
        for p in pages:
            f.write(json.dumps(p, ensure_ascii=False) + "\n")

    vocab = collect_vocab(threads, dump, hq, pages)
    news, forum = build_embeddings(vocab)
    with open(os.path.join(outdir, "embeddings", "news.vec"), "w") as f:
        f.write("%d 24\n" % len(news))
        f.write("\n".join(news) + "\n")
    with open(os.path.join(outdir, "embeddings", "forum.vec"), "w") as f:
        f.write("%d 16\n" % len(forum))
        f.write("\n".join(forum) + "\n")

    write_lexicons(outdir)
    write_word_classes(outdir, vocab)

    used_categories = []
    for t in threads + dump + hq:
        c = t["question"]["category"]
        if c not in used_categories:
            used_categories.append(c)
    write_categories(outdir, used_categories)

    with open(os.path.join(outdir, "smileys_positive.txt"), "w") as f:
        f.write("\n".join(SMILEYS_POS) + "\n")
    with open(os.path.join(outdir, "smileys_negative.txt"), "w") as f:
        f.write("\n".join(SMILEYS_NEG) + "\n")
    with open(os.path.join(outdir, "trusted_authors.txt"), "w") as f:
        f.write("\n".join(TRUSTED_AUTHORS) + "\n")
    with open(os.path.join(outdir, "domains_reputed.txt"), "w") as f:
        f.write("# hosts treated as reputed sources (suffix match)\n")
        f.write("\n".join(REPUTED_HOSTS) + "\n")
    with open(os.path.join(outdir, "domains_forum.txt"), "w") as f:
        f.write("# hosts treated as forums (suffix match)\n")
        f.write("\n".join(["qatarliving.com", "iloveqatar.net", "expatwoman.com",
                           "reddit.com"]) + "\n")

    write_config(root)

    n_labeled = sum(1 for t in threads for a in t["answers"] if a["fact_label"])
    n_pos = sum(1 for t in threads for a in t["answers"] if a["fact_label"] == "FactTrue")
    print("threads: %d  labeled: %d  positive: %d  negative: %d" %
          (len(threads), n_labeled, n_pos, n_labeled - n_pos))
    print("calibrated chronological MAP (ascending): %.4f" % calibrated)
    fixture_hits = [a["id"] for t in threads for a in t["answers"]
                    if "Darb El Saai" in a["body"]]
    print("fixture answers:", fixture_hits)
    assert len(fixture_hits) == 1, fixture_hits


if __name__ == "__main__":
    main()
