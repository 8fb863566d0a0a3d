/* sched.c variant: the loop invariant is weakened to true, so the exit
 * obligation of main_function cannot be established. */

enum {
    OCTRNG_ENABLE_OUTPUT  = 1 << 1,
    OCTRNG_ENABLE_ENTROPY = 1 << 0,
    OCTRNG_ENTROPY_REG    = 0,
    MAX_QUEUE             = 8,
    TIMEOUT               = 100
};

enum { OCTRNG_CONTROL_ADDR = 0x0001180040000000 };

struct rng_device {
    unsigned long control_addr;
};

struct task {
    unsigned int timeout;
    unsigned int start;
    void (*timeout_fun)(void);
};

static struct rng_device rng_regs;
static unsigned int timer;
static int rand_value;
static unsigned int running_tasks;
static unsigned int current_tasks;
static struct task tasks[MAX_QUEUE];

void octrng_rnd(void);

unsigned int get_register(unsigned long addr)
{
    if (addr == OCTRNG_CONTROL_ADDR)
        return (unsigned int)rng_regs.control_addr;
    if (addr == OCTRNG_ENTROPY_REG) {
        if ((rng_regs.control_addr & OCTRNG_ENABLE_OUTPUT) != 0
            && (rng_regs.control_addr & OCTRNG_ENABLE_ENTROPY) != 0)
            return timer;
        return 0;
    }
    return 0;
}

void set_register(unsigned long addr, unsigned long value)
{
    if (addr == OCTRNG_CONTROL_ADDR)
        rng_regs.control_addr = value;
}

int add_task(void (*fun)(void), unsigned int timeout)
{
    unsigned int slot;

    if (running_tasks >= MAX_QUEUE)
        return -1;
    slot = current_tasks % MAX_QUEUE;
    tasks[slot].timeout = timeout;
    tasks[slot].start = timer;
    tasks[slot].timeout_fun = fun;
    current_tasks = (slot + 1) % MAX_QUEUE;
    running_tasks = running_tasks + 1;
    return 0;
}

/*@ requires true;
    ensures (rng_regs.control_addr & OCTRNG_ENABLE_OUTPUT) != 0
         && (rng_regs.control_addr & OCTRNG_ENABLE_ENTROPY) != 0; @*/
void octrng_attach(void)
{
    unsigned long control_reg;

    control_reg = get_register(OCTRNG_CONTROL_ADDR);
    control_reg |= OCTRNG_ENABLE_OUTPUT;
    control_reg |= OCTRNG_ENABLE_ENTROPY;
    set_register(OCTRNG_CONTROL_ADDR, control_reg);

    add_task(octrng_rnd, 5);
}

/*@ requires timer == a
          && running_tasks < MAX_QUEUE
          && current_tasks < MAX_QUEUE
          && (rng_regs.control_addr & OCTRNG_ENABLE_OUTPUT) != 0
          && (rng_regs.control_addr & OCTRNG_ENABLE_ENTROPY) != 0;
    ensures rand_value == a;
    total; @*/
void octrng_rnd(void)
{
    unsigned int value;

    rand_value = get_register(OCTRNG_ENTROPY_REG);
    add_task(octrng_rnd, 10);
}

/* One scheduler time unit passes. */
/*@ requires timer == a;
    ensures timer == a + 1;
    total; @*/
void idle(void)
{
    timer = timer + 1;
}

/* Run every task whose delay has expired: the slot is freed first, so a
 * callback may re-queue itself. The indirect call keeps this function out of
 * the translated subset; its contract is trusted instead. */
/*@ dont_translate;
    requires true;
    ensures timer == \old(timer);
    total; @*/
void run_tasks(void)
{
    unsigned int i;

    for (i = 0; i < MAX_QUEUE; i++) {
        if (tasks[i].timeout_fun != 0) {
            if (timer - tasks[i].start >= tasks[i].timeout) {
                void (*fun)(void);

                fun = tasks[i].timeout_fun;
                tasks[i].timeout_fun = 0;
                running_tasks = running_tasks - 1;
                fun();
            }
        }
    }
}

/*@ requires timer == 0 && running_tasks == 0;
    ensures timer == TIMEOUT;
    total; @*/
void main_function(void)
{
    octrng_attach();

    /*@ invariant true;
        measure TIMEOUT - timer; @*/
    while (timer < TIMEOUT) {
        run_tasks();
        idle();
    }
}
